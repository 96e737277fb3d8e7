//! Executes the tasks of a validated scenario.

use std::cell::OnceCell;

use serde_json::{json, Value};

use qcenter_core::envalg::EnvelopingAlgebra;
use qcenter_core::henselift::{build_center_iso, hensel_lift, verify_lift, Lift, LiftVerification};
use qcenter_core::invcenter::{invariants_up_to, moment_image_basis, subalgebra_basis, CenterContext};
use qcenter_core::starprod::{check_axioms, check_homogeneity};
use qcenter_core::weyl::{jacobian_rank, top_symbol, weyl_centrality_failure, weyl_monomials, weyl_specialize};
use qcenter_core::{Error as CoreError, GradedSubspace, HSeries, Poly, Result as CoreResult};

use crate::expr::{format_poly, format_series};
use crate::report::{Failure, Parameters, Report, TaskReport};
use crate::sample::{random_poly, random_weight_homogeneous, task_rng};
use crate::scenario::{Scenario, Task};

const MAX_SAMPLE_TERMS: usize = 3;
const LIE_SAMPLE_DEGREE: u32 = 4;

struct Run<'a> {
    sc: &'a Scenario,
    ctx: OnceCell<CoreResult<CenterContext<'a>>>,
    poisson_center: OnceCell<CoreResult<GradedSubspace>>,
    lifts: OnceCell<Vec<CoreResult<Lift>>>,
}

pub fn run_scenario(sc: &Scenario) -> Report {
    let run = Run { sc, ctx: OnceCell::new(), poisson_center: OnceCell::new(), lifts: OnceCell::new() };
    let tasks = sc
        .tasks
        .iter()
        .map(|t| {
            let result = match t {
                Task::Axioms => run.axioms(),
                Task::Eq25 => run.eq25(),
                Task::Diagram1 => run.diagram1(),
                Task::Invariants => run.invariants(),
                Task::Centers => run.centers(),
                Task::Lift => run.lift(),
                Task::Iso => run.iso(),
                Task::Weyl => run.weyl(),
            };
            result.unwrap_or_else(|e| TaskReport::new(t.name(), json!({}), vec![Failure::new("error", e.to_string())]))
        })
        .collect();
    let parameters = Parameters {
        truncation: sc.truncation,
        max_degree: sc.max_degree,
        test_degree: sc.test_degree,
        seed: sc.seed,
        n: sc.space().n(),
        lie_dim: sc.action.lie().dim(),
    };
    Report::new(&sc.name, parameters, tasks)
}

impl<'a> Run<'a> {
    fn poly(&self, p: &Poly) -> String {
        format_poly(p, &self.sc.var_names)
    }

    fn series(&self, s: &HSeries) -> String {
        format_series(s, &self.sc.var_names)
    }

    fn ctx(&self) -> CoreResult<&CenterContext<'a>> {
        let sc: &'a Scenario = self.sc;
        self.ctx.get_or_init(|| CenterContext::new(&sc.action, sc.test_degree)).as_ref().map_err(Clone::clone)
    }

    fn poisson_center(&self) -> CoreResult<&GradedSubspace> {
        let ctx = self.ctx()?;
        self.poisson_center.get_or_init(|| ctx.poisson_center(self.sc.max_degree)).as_ref().map_err(Clone::clone)
    }

    fn lifts(&self) -> &[CoreResult<Lift>] {
        self.lifts.get_or_init(|| {
            self.sc.lifts.iter().map(|l| hensel_lift(&l.element, &l.relation, &self.sc.action)).collect()
        })
    }

    fn axioms(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let star = sc.star();
        let nvars = star.nvars();
        let mut rng = task_rng(sc.seed, &Task::Axioms);
        let deg = sc.samples.max_degree;
        let triples: Vec<(Poly, Poly, Poly)> = (0..sc.samples.axioms)
            .map(|_| {
                let f = random_poly(&mut rng, nvars, deg, MAX_SAMPLE_TERMS);
                let g = random_poly(&mut rng, nvars, deg, MAX_SAMPLE_TERMS);
                let h = random_poly(&mut rng, nvars, deg, MAX_SAMPLE_TERMS);
                (f, g, h)
            })
            .collect();
        let axioms = check_axioms(star, &triples)?;
        let mut failures: Vec<Failure> = axioms
            .failures()
            .map(|(i, r)| {
                Failure::new(r.check, format!("residual {}", self.series(&r.residual))).sample(i).order(r.order())
            })
            .collect();
        let pairs: Vec<(Poly, Poly)> = (0..sc.samples.homogeneity)
            .map(|_| {
                let f = random_weight_homogeneous(&mut rng, star.space(), deg, MAX_SAMPLE_TERMS);
                let g = random_weight_homogeneous(&mut rng, star.space(), deg, MAX_SAMPLE_TERMS);
                (f, g)
            })
            .collect();
        let homogeneity = check_homogeneity(star, &pairs)?;
        for v in &homogeneity.violations {
            failures.push(
                Failure::new(
                    "homogeneity",
                    format!("expected weight {}, found weights {:?}", v.expected_weight, v.found_weights),
                )
                .sample(v.sample)
                .order(Some(v.l)),
            );
        }
        let summary = json!({
            "order": axioms.order,
            "triples": triples.len(),
            "sample_max_degree": deg,
            "homogeneity_pairs": pairs.len(),
            "homogeneity_terms_checked": homogeneity.checked,
            "weights": star.space().weights(),
            "hbar_weight": -star.space().k(),
        });
        Ok(TaskReport::new("axioms", summary, failures))
    }

    fn eq25(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let mut rng = task_rng(sc.seed, &Task::Eq25);
        let samples: Vec<Poly> = (0..sc.samples.eq25)
            .map(|_| random_poly(&mut rng, sc.action.nvars(), sc.samples.max_degree, MAX_SAMPLE_TERMS))
            .collect();
        let report = sc.action.check_eq25(&samples)?;
        let failures = report
            .failures
            .iter()
            .map(|f| {
                Failure::new(
                    format!("[H_{}, f] - hbar{{H_{}, f}}", sc.labels()[f.hamiltonian], sc.labels()[f.hamiltonian]),
                    format!("residual {}", self.series(&f.residual)),
                )
                .sample(f.sample)
                .order(f.residual.valuation())
            })
            .collect();
        let hamiltonians: Vec<Value> = sc
            .labels()
            .iter()
            .zip(sc.action.quantum_hamiltonians())
            .map(|(l, h)| json!({"basis": l, "quantum": self.series(h)}))
            .collect();
        let summary = json!({
            "order": report.order,
            "samples": samples.len(),
            "checked": report.checked,
            "hamiltonians": hamiltonians,
        });
        Ok(TaskReport::new("eq25", summary, failures))
    }

    fn diagram1(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let lie = sc.action.lie();
        let alg = EnvelopingAlgebra::new(lie.clone(), sc.truncation);
        let mut rng = task_rng(sc.seed, &Task::Diagram1);
        let mut failures = Vec::new();
        for i in 0..sc.samples.diagram1 {
            let s = random_poly(&mut rng, lie.dim(), LIE_SAMPLE_DEGREE, MAX_SAMPLE_TERMS);
            let back = alg.classical_limit(&alg.symmetrize(&s)?);
            if back != s {
                failures.push(
                    Failure::new(
                        "classical_limit(symmetrize(s)) = s",
                        format!("s = {}, got {}", s.display_with(sc.labels()), back.display_with(sc.labels())),
                    )
                    .sample(i),
                );
            }
        }
        let mut invariants = Vec::new();
        for (z, name) in lie.invariant_generators().iter().zip(&sc.invariant_names) {
            let report = sc.action.check_diagram1(&alg, z)?;
            let adjoint_invariant = alg.adjoint_invariant_check(&alg.symmetrize(z)?)?;
            if !report.section_holds {
                failures.push(Failure::new("section", format!("{name}: classical limit of symmetrize differs")));
            }
            if !report.commutes {
                failures.push(Failure::new(
                    "comoment(symmetrize(z)) = pullback(z) mod hbar",
                    format!("{name}: {} vs {}", self.series(&report.quantum), self.poly(&report.pullback)),
                ));
            }
            if !adjoint_invariant {
                failures.push(Failure::new("adjoint invariance", format!("{name}: symmetrize(z) is not ad-invariant")));
            }
            invariants.push(json!({
                "name": name,
                "pullback": self.poly(&report.pullback),
                "comoment": self.series(&report.quantum),
                "adjoint_invariant": adjoint_invariant,
            }));
        }
        let summary = json!({
            "order": sc.truncation,
            "samples": sc.samples.diagram1,
            "sample_max_degree": LIE_SAMPLE_DEGREE,
            "invariants": invariants,
        });
        Ok(TaskReport::new("diagram1", summary, failures))
    }

    fn invariants(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let d = sc.max_degree;
        let inv = invariants_up_to(&sc.action, d)?;
        let mut failures = Vec::new();
        for (deg, basis) in inv.slices() {
            for b in basis {
                if !sc.action.is_invariant(b)? {
                    failures.push(Failure::new("invariant", format!("{} is not invariant", self.poly(b))).degree(deg));
                }
            }
        }
        let moment = moment_image_basis(&sc.action, d)?;
        if !moment.is_subspace_of(&inv) {
            failures.push(Failure::new("moment image", "moment image is not contained in the invariants"));
        }
        for (z, name) in sc.section.pullbacks().iter().zip(&sc.invariant_names) {
            if !inv.contains(z) && z.degree().unwrap_or(0) <= d {
                failures.push(Failure::new("pullback", format!("pullback of {name} is not invariant")));
            }
        }
        let slices: Vec<Value> = (0..=d)
            .map(|k| {
                json!({
                    "degree": k,
                    "dim": inv.dim(k),
                    "basis": inv.basis(k).iter().map(|b| self.poly(b)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let summary = json!({
            "max_degree": d,
            "dims": (0..=d).map(|k| inv.dim(k)).collect::<Vec<_>>(),
            "moment_image_dims": (0..=d).map(|k| moment.dim(k)).collect::<Vec<_>>(),
            "slices": slices,
        });
        Ok(TaskReport::new("invariants", summary, failures))
    }

    fn centers(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let report = self.ctx()?.compare(sc.max_degree)?;
        let mut failures = Vec::new();
        for row in &report.rows {
            if !row.ranks_agree() {
                failures.push(
                    Failure::new(
                        "poisson dim = quantum rank",
                        format!("poisson dim {}, quantum rank {}", row.poisson_dim, row.quantum_rank),
                    )
                    .degree(row.degree),
                );
            }
        }
        if !report.classical_parts_central {
            failures.push(Failure::new(
                "classical parts",
                "classical part of a quantum central element is not Poisson central",
            ));
        }
        if !report.moment_image_central {
            failures.push(Failure::new("moment image", "pulled-back invariant is not Poisson central"));
        }
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "degree": r.degree,
                    "invariants_dim": r.invariants_dim,
                    "poisson_dim": r.poisson_dim,
                    "quantum_rank": r.quantum_rank,
                    "moment_image_dim": r.moment_image_dim,
                    "poisson_basis": r.poisson_basis.iter().map(|b| self.poly(b)).collect::<Vec<_>>(),
                    "quantum_lifts": r.quantum_lifts.iter().map(|s| self.series(s)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let summary = json!({
            "max_degree": report.max_degree,
            "test_degree": report.test_degree,
            "order": report.order,
            "rows": rows,
            "classical_parts_central": report.classical_parts_central,
            "moment_image_central": report.moment_image_central,
        });
        Ok(TaskReport::new("centers", summary, failures))
    }

    fn verification_failures(&self, name: &str, v: &LiftVerification, failures: &mut Vec<Failure>) {
        if !v.classical_holds {
            failures.push(Failure::new("P(f) = 0", format!("{name}: classical relation fails")));
        }
        if let Some(order) = v.relation_failure {
            failures.push(Failure::new("relation", format!("{name}: quantum relation fails")).order(Some(order)));
        }
        if let Some((test, order)) = v.central_failure {
            failures.push(
                Failure::new("central", format!("{name}: fails to commute with test invariant {test}"))
                    .order(Some(order)),
            );
        }
        for (i, order) in &v.coefficient_failures {
            failures.push(
                Failure::new("coefficient central", format!("{name}: coefficient a_{i} is not central"))
                    .order(Some(*order)),
            );
        }
        if !v.homogeneous {
            failures.push(Failure::new("homogeneous", format!("{name}: lift is not homogeneous")));
        }
    }

    fn lift(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let ctx = self.ctx()?;
        let mut failures = Vec::new();
        let mut entries = Vec::new();
        for (req, lift) in sc.lifts.iter().zip(self.lifts()) {
            let coeffs: Vec<String> = req.coeffs.iter().map(|a| format_poly(a, &sc.invariant_names)).collect();
            let mut entry = json!({
                "name": req.name,
                "element": self.poly(&req.element),
                "relation_degree": req.relation.degree(),
                "relation_coefficients": coeffs,
            });
            match lift {
                Ok(lift) => {
                    let v = verify_lift(&lift.lift, &req.relation, ctx)?;
                    self.verification_failures(&req.name, &v, &mut failures);
                    let triangle = lift.lift.classical_part() == &req.element;
                    if !triangle {
                        failures.push(Failure::new("triangle", format!("{}: lift does not reduce to f", req.name)));
                    }
                    entry["lift"] = json!(self.series(&lift.lift));
                    entry["steps"] = json!(lift
                        .steps
                        .iter()
                        .map(|s| json!({"order": s.order, "rhs": self.poly(&s.rhs), "correction": self.poly(&s.correction)}))
                        .collect::<Vec<_>>());
                    entry["verified"] = json!(v.passed());
                    entry["triangle"] = json!(triangle);
                }
                Err(CoreError::LiftObstruction { order, remainder }) => {
                    failures.push(
                        Failure::new("lift", format!("{}: obstruction, remainder {}", req.name, self.poly(remainder)))
                            .order(Some(*order)),
                    );
                    entry["obstruction"] = json!({"order": order, "remainder": self.poly(remainder)});
                }
                Err(e) => {
                    failures.push(Failure::new("lift", format!("{}: {e}", req.name)));
                }
            }
            entries.push(entry);
        }
        let shifts: Vec<Value> = sc
            .invariant_names
            .iter()
            .zip(sc.section.shifts())
            .map(|(n, s)| json!({"name": n, "shift": s.iter().map(|c| c.to_string()).collect::<Vec<_>>()}))
            .collect();
        let summary = json!({
            "order": sc.truncation,
            "test_degree": sc.test_degree,
            "section_shifts": shifts,
            "lifts": entries,
        });
        Ok(TaskReport::new("lift", summary, failures))
    }

    fn iso(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let ctx = self.ctx()?;
        let mut failures = Vec::new();
        let gens: Vec<(Poly, _)> = sc.lifts.iter().map(|l| (l.element.clone(), l.relation.clone())).collect();
        let mut summary = json!({
            "order": sc.truncation,
            "relations": sc.generator_relations.len(),
        });
        match build_center_iso(&gens, &sc.generator_relations, ctx) {
            Ok(iso) => {
                for (e, req) in iso.entries.iter().zip(&sc.lifts) {
                    self.verification_failures(&req.name, &e.verification, &mut failures);
                    if !e.triangle_holds {
                        failures.push(Failure::new("triangle", format!("{}: lift does not reduce to f", req.name)));
                    }
                    if !e.equivariant {
                        failures.push(Failure::new("equivariant", format!("{}: lift changes weight", req.name)));
                    }
                }
                summary["relations_checked"] = json!(iso.relations_checked);
                summary["entries"] = json!(iso
                    .entries
                    .iter()
                    .zip(&sc.lifts)
                    .map(|(e, r)| json!({"name": r.name, "triangle": e.triangle_holds, "equivariant": e.equivariant}))
                    .collect::<Vec<_>>());
            }
            Err(CoreError::RelationViolation { index, order }) => {
                failures.push(
                    Failure::new("relation", format!("generator relation {index} fails under star")).order(Some(order)),
                );
            }
            Err(CoreError::LiftObstruction { order, remainder }) => {
                failures.push(
                    Failure::new("lift", format!("obstruction, remainder {}", self.poly(&remainder)))
                        .order(Some(order)),
                );
            }
            Err(e) => failures.push(Failure::new("iso", e.to_string())),
        }
        // the designated center generators generate the Poisson center slice by slice
        let center = self.poisson_center()?;
        let gen_polys: Vec<Poly> = sc.center_generators.iter().map(|&i| sc.lifts[i].element.clone()).collect();
        let generated = subalgebra_basis(sc.action.nvars(), &gen_polys, sc.max_degree)?;
        let mut dims = Vec::new();
        for d in 0..=sc.max_degree {
            let (g, c) = (generated.dim(d), center.dim(d));
            dims.push(json!({"degree": d, "generated": g, "poisson_center": c}));
            if g != c || !generated.basis(d).iter().all(|b| center.contains(b)) {
                failures.push(
                    Failure::new("generation", format!("generated dimension {g}, Poisson center dimension {c}"))
                        .degree(d),
                );
            }
        }
        summary["center_generators"] =
            json!(sc.center_generators.iter().map(|&i| sc.lifts[i].name.clone()).collect::<Vec<_>>());
        summary["generated_dims"] = json!(dims);
        Ok(TaskReport::new("iso", summary, failures))
    }

    fn weyl(&self) -> CoreResult<TaskReport> {
        let sc = self.sc;
        let star = sc.star();
        let ctx = self.ctx()?;
        let mut failures = Vec::new();
        let tests: Vec<Poly> = (1..=sc.max_degree).flat_map(|d| ctx.invariants().basis(d).to_vec()).collect();
        let quadratic = ctx.invariants().dim(2);
        let mut specialized = Vec::new();
        let mut degrees = Vec::new();
        let mut generators = Vec::new();
        for &i in &sc.center_generators {
            let req = &sc.lifts[i];
            let lift = match &self.lifts()[i] {
                Ok(l) => l,
                Err(e) => {
                    failures.push(Failure::new("lift", format!("{}: {e}", req.name)));
                    continue;
                }
            };
            let w = weyl_specialize(&lift.lift)?;
            if let Some(k) = weyl_centrality_failure(star, &w, &tests)? {
                failures.push(Failure::new(
                    "central at hbar = 1",
                    format!("{} fails to commute with {}", req.name, self.poly(&tests[k])),
                ));
            }
            generators.push(json!({"name": req.name, "weyl": self.poly(w.symbol())}));
            degrees.push(req.element.degree().unwrap_or(0));
            specialized.push(w);
        }
        let classical: Vec<Poly> = sc.center_generators.iter().map(|&i| sc.lifts[i].element.clone()).collect();
        let rank = jacobian_rank(star, &classical)?;
        if rank != classical.len() {
            failures
                .push(Failure::new("independence", format!("Jacobian rank {rank} for {} generators", classical.len())));
        }
        let center = self.poisson_center()?;
        let mut slices = Vec::new();
        if specialized.len() == classical.len() {
            for d in 0..=sc.max_degree {
                let tops: Vec<Poly> = weyl_monomials(star, &specialized, &degrees, d)?.iter().map(top_symbol).collect();
                let mut span = GradedSubspace::new(star.nvars());
                span.set_slice(d, tops.iter().filter(|t| !t.is_zero()).cloned())?;
                let ok = span.dim(d) == center.dim(d) && span.basis(d).iter().all(|b| center.contains(b));
                if !ok {
                    failures.push(
                        Failure::new(
                            "top symbols span the Poisson center",
                            format!("span dimension {}, Poisson center dimension {}", span.dim(d), center.dim(d)),
                        )
                        .degree(d),
                    );
                }
                slices.push(json!({"degree": d, "weyl_monomials": tops.len(), "span_dim": span.dim(d), "poisson_center_dim": center.dim(d)}));
            }
        }
        let summary = json!({
            "generators": generators,
            "jacobian_rank": rank,
            "tested_invariants": tests.len(),
            "quadratic_invariants": quadratic,
            "slices": slices,
        });
        Ok(TaskReport::new("weyl", summary, failures))
    }
}
