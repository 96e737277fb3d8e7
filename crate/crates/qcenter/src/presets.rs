//! Scenarios shipped with the binary.

pub const PRESETS: [(&str, &str); 4] = [
    ("trivial_k2", include_str!("../scenarios/trivial_k2.json")),
    ("torus_k2", include_str!("../scenarios/torus_k2.json")),
    ("sl2_tstar_k2", include_str!("../scenarios/sl2_tstar_k2.json")),
    ("torus_k4", include_str!("../scenarios/torus_k4.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}
