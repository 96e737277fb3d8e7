//! Scenario files (`qcenter-scenario/1`) and their validation.
//!
//! A scenario is a JSON document. Scalars are written as strings (`"3/4"`)
//! and polynomials as expressions over the relevant names:
//!
//! * phase-space expressions use `q1..qn, p1..pn` and `hbar`;
//! * bracket values and invariants use the Lie algebra labels;
//! * relation coefficients use the invariant names;
//! * generator relations use the lift names.

use std::collections::BTreeSet;

use qcenter_core::envalg::{Bracket, HamiltonianAction, LieAlgebraData};
use qcenter_core::henselift::{CenterSection, MonicRelation};
use qcenter_core::{Error as CoreError, HSeries, Poly, Scalar, StarProduct, SymplecticSpace};
use serde::{Deserialize, Serialize};

use crate::expr::{self, ExprError};
use crate::QcError;

pub const SCENARIO_SCHEMA: &str = "qcenter-scenario/1";

pub const DEFAULT_TRUNCATION: usize = 8;
pub const DEFAULT_MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Axioms,
    Eq25,
    Diagram1,
    Invariants,
    Centers,
    Lift,
    Iso,
    Weyl,
}

impl Task {
    pub const ALL: [Task; 8] =
        [Task::Axioms, Task::Eq25, Task::Diagram1, Task::Invariants, Task::Centers, Task::Lift, Task::Iso, Task::Weyl];

    pub fn name(&self) -> &'static str {
        match self {
            Task::Axioms => "axioms",
            Task::Eq25 => "eq25",
            Task::Diagram1 => "diagram1",
            Task::Invariants => "invariants",
            Task::Centers => "centers",
            Task::Lift => "lift",
            Task::Iso => "iso",
            Task::Weyl => "weyl",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub space: SpaceSpec,
    pub lie: LieSpec,
    #[serde(default)]
    pub hamiltonians: Vec<HamiltonianSpec>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub max_degree: Option<u32>,
    #[serde(default)]
    pub test_degree: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub samples: SampleSpec,
    #[serde(default)]
    pub lifts: Vec<LiftSpec>,
    #[serde(default)]
    pub generator_relations: Vec<String>,
    #[serde(default)]
    pub center_generators: Vec<String>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub n: usize,
    /// Rows of the Poisson bivector; the standard form when absent.
    #[serde(default)]
    pub poisson: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub weights: Option<Vec<i64>>,
    #[serde(default)]
    pub hbar_weight: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default)]
    pub invariants: Vec<InvariantSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantSpec {
    pub name: String,
    pub expr: String,
    /// Scalar polynomial in `hbar` added to the quantized generator.
    #[serde(default)]
    pub section_shift: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub basis: String,
    pub classical: String,
    #[serde(default)]
    pub quantum: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSpec {
    pub axioms: usize,
    pub homogeneity: usize,
    pub eq25: usize,
    pub diagram1: usize,
    pub max_degree: u32,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { axioms: 100, homogeneity: 50, eq25: 50, diagram1: 30, max_degree: 6 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    pub name: String,
    pub element: String,
    /// `a_0, …, a_{n-1}` of the monic relation, in the invariant names.
    pub relation: Vec<String>,
}

/// Command-line overrides applied before validation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub truncation: Option<usize>,
    pub max_degree: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct LiftRequest {
    pub name: String,
    pub element: Poly,
    pub coeffs: Vec<Poly>,
    pub relation: MonicRelation,
}

/// A validated scenario with its algebraic data built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub action: HamiltonianAction,
    pub var_names: Vec<String>,
    pub invariant_names: Vec<String>,
    pub section: CenterSection,
    pub truncation: usize,
    pub max_degree: u32,
    pub test_degree: u32,
    pub seed: u64,
    pub samples: SampleSpec,
    pub lifts: Vec<LiftRequest>,
    pub generator_relations: Vec<Poly>,
    pub center_generators: Vec<usize>,
    /// Canonical execution order.
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn space(&self) -> &SymplecticSpace {
        self.action.star().space()
    }

    pub fn star(&self) -> &StarProduct {
        self.action.star()
    }

    pub fn labels(&self) -> &[String] {
        self.action.lie().labels()
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, QcError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| QcError::Parse(format!("scenario: {e}")))?;
        if file.schema != SCENARIO_SCHEMA {
            return Err(QcError::Parse(format!(
                "scenario: unsupported schema `{}` (expected `{SCENARIO_SCHEMA}`)",
                file.schema
            )));
        }
        Ok(file)
    }

    pub fn build(&self, overrides: Overrides) -> Result<Scenario, QcError> {
        let truncation = overrides.truncation.or(self.truncation).unwrap_or(DEFAULT_TRUNCATION);
        let max_degree = overrides.max_degree.or(self.max_degree).unwrap_or(DEFAULT_MAX_DEGREE);
        let space = self.build_space()?;
        let var_names = space.var_names();
        let labels = self.lie.labels.clone();
        unique("lie.labels", &labels)?;
        for l in &labels {
            if l == "hbar" || var_names.contains(l) {
                return Err(invalid(format!("lie.labels: `{l}` clashes with a reserved name")));
            }
        }

        let invariant_names: Vec<String> = self.lie.invariants.iter().map(|z| z.name.clone()).collect();
        unique("lie.invariants", &invariant_names)?;
        let mut generators = Vec::new();
        let mut shifts = Vec::new();
        for z in &self.lie.invariants {
            let at = format!("lie.invariants.{}", z.name);
            generators.push(expr::parse_poly(&z.expr, &labels).map_err(|e| expr_error(&at, e))?);
            let shift = match &z.section_shift {
                Some(s) => expr::parse_hbar_poly(s).map_err(|e| expr_error(&format!("{at}.section_shift"), e))?,
                None => Vec::new(),
            };
            shifts.push(shift);
        }
        let mut brackets = Vec::new();
        for b in &self.lie.brackets {
            let at = format!("lie.brackets[{}, {}]", b.left, b.right);
            let index = |name: &str| {
                labels.iter().position(|l| l == name).ok_or_else(|| invalid(format!("{at}: unknown label `{name}`")))
            };
            brackets.push(Bracket {
                left: index(&b.left)?,
                right: index(&b.right)?,
                value: expr::parse_linear(&b.value, &labels).map_err(|e| expr_error(&at, e))?,
            });
        }
        let lie = LieAlgebraData::from_brackets(labels.clone(), &brackets, generators)
            .map_err(|e| core_error("lie", e, &labels, &invariant_names))?;

        let star = StarProduct::new(space, truncation);
        let (classical, quantum) = self.build_hamiltonians(&labels, &var_names, truncation)?;
        let action = HamiltonianAction::new(lie, star, classical, quantum)
            .map_err(|e| core_error("hamiltonians", e, &labels, &invariant_names))?;
        if let Some((i, j)) = action.quantum_bracket_failure() {
            return Err(invalid(format!(
                "hamiltonians: quantum hamiltonians `{}` and `{}` violate the bracket relation",
                labels[i], labels[j]
            )));
        }
        check_eq25_at_load(&action, &labels)?;

        let section = CenterSection::with_shifts(&action, shifts)
            .map_err(|e| core_error("lie.invariants", e, &labels, &invariant_names))?;
        let test_degree = match self.test_degree {
            Some(t) => t,
            None => max_degree + section.pullbacks().iter().filter_map(Poly::degree).max().unwrap_or(0).max(2),
        };

        let mut lifts = Vec::new();
        let lift_names: Vec<String> = self.lifts.iter().map(|l| l.name.clone()).collect();
        unique("lifts", &lift_names)?;
        for l in &self.lifts {
            let at = format!("lifts.{}", l.name);
            let element = expr::parse_poly(&l.element, &var_names).map_err(|e| expr_error(&at, e))?;
            if l.relation.is_empty() {
                return Err(invalid(format!("{at}: the relation needs at least one coefficient")));
            }
            let coeffs = l
                .relation
                .iter()
                .map(|a| expr::parse_poly(a, &invariant_names).map_err(|e| expr_error(&format!("{at}.relation"), e)))
                .collect::<Result<Vec<_>, _>>()?;
            let relation = MonicRelation::from_section(&section, &element, &coeffs)
                .map_err(|e| core_error(&at, e, &labels, &invariant_names))?;
            lifts.push(LiftRequest { name: l.name.clone(), element, coeffs, relation });
        }
        let generator_relations = self
            .generator_relations
            .iter()
            .map(|r| expr::parse_poly(r, &lift_names).map_err(|e| expr_error("generator_relations", e)))
            .collect::<Result<Vec<_>, _>>()?;
        let center_generators = self
            .center_generators
            .iter()
            .map(|g| {
                lift_names
                    .iter()
                    .position(|n| n == g)
                    .ok_or_else(|| invalid(format!("center_generators: unknown lift `{g}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let requested: BTreeSet<Task> = self.tasks.iter().cloned().collect();
        if requested.len() != self.tasks.len() {
            return Err(invalid("tasks: duplicate entries".to_string()));
        }
        Ok(Scenario {
            name: self.name.clone(),
            description: self.description.clone(),
            action,
            var_names,
            invariant_names,
            section,
            truncation,
            max_degree,
            test_degree,
            seed: self.seed,
            samples: self.samples.clone(),
            lifts,
            generator_relations,
            center_generators,
            tasks: requested.into_iter().collect(),
        })
    }

    fn build_space(&self) -> Result<SymplecticSpace, QcError> {
        let n = self.space.n;
        let base = match &self.space.poisson {
            None => SymplecticSpace::standard(n),
            Some(rows) => {
                let parsed = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| {
                                s.trim()
                                    .parse::<Scalar>()
                                    .map_err(|_| QcError::Parse(format!("space.poisson: bad scalar `{s}`")))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SymplecticSpace::new(n, parsed, vec![-1; 2 * n], 2).map_err(|e| invalid(format!("space: {e}")))?
            }
        };
        if self.space.weights.is_none() && self.space.hbar_weight.is_none() {
            return Ok(base);
        }
        let weights = self.space.weights.clone().unwrap_or_else(|| base.weights().to_vec());
        let k = self.space.hbar_weight.unwrap_or(base.k());
        base.with_weights(weights, k).map_err(|e| invalid(format!("space: {e}")))
    }

    fn build_hamiltonians(
        &self,
        labels: &[String],
        var_names: &[String],
        order: usize,
    ) -> Result<(Vec<Poly>, Option<Vec<HSeries>>), QcError> {
        let mut classical = vec![None; labels.len()];
        let mut quantum = vec![None; labels.len()];
        for h in &self.hamiltonians {
            let at = format!("hamiltonians.{}", h.basis);
            let i = labels.iter().position(|l| *l == h.basis).ok_or_else(|| invalid(format!("{at}: unknown label")))?;
            if classical[i].is_some() {
                return Err(invalid(format!("{at}: listed twice")));
            }
            classical[i] = Some(expr::parse_poly(&h.classical, var_names).map_err(|e| expr_error(&at, e))?);
            if let Some(q) = &h.quantum {
                quantum[i] =
                    Some(expr::parse_series(q, var_names, order).map_err(|e| expr_error(&format!("{at}.quantum"), e))?);
            }
        }
        let classical = classical
            .into_iter()
            .zip(labels)
            .map(|(h, l)| h.ok_or_else(|| invalid(format!("hamiltonians: missing hamiltonian for `{l}`"))))
            .collect::<Result<Vec<Poly>, _>>()?;
        let quantum = if quantum.iter().any(Option::is_some) {
            let star_embed = |h: &Poly| HSeries::from_poly(h.clone(), order);
            Some(quantum.into_iter().zip(&classical).map(|(q, h)| q.unwrap_or_else(|| star_embed(h))).collect())
        } else {
            None
        };
        Ok((classical, quantum))
    }
}

/// The identity `[Ĥ_ξ, f]_★ = ħ{H_ξ, f}` on every monomial of degree ≤ 3.
fn check_eq25_at_load(act: &HamiltonianAction, labels: &[String]) -> Result<(), QcError> {
    let nvars = act.nvars();
    let samples: Vec<Poly> = (1..=3)
        .flat_map(|d| qcenter_core::Monomial::all_of_degree(nvars, d))
        .map(|m| Poly::term(m, qcenter_core::int(1)))
        .collect();
    let report = act.check_eq25(&samples).map_err(|e| invalid(format!("hamiltonians: {e}")))?;
    if let Some(f) = report.failures.first() {
        return Err(invalid(format!(
            "hamiltonians: quantum hamiltonian `{}` violates [H, f] = hbar {{H, f}} on f = {}",
            labels[f.hamiltonian],
            expr::format_poly(&samples[f.sample], &act.star().space().var_names())
        )));
    }
    Ok(())
}

fn invalid(message: String) -> QcError {
    QcError::Validation(message)
}

fn expr_error(at: &str, e: ExprError) -> QcError {
    if e.is_syntax() {
        QcError::Parse(format!("{at}: {e}"))
    } else {
        QcError::Validation(format!("{at}: {e}"))
    }
}

/// Core errors rendered with scenario names in place of indices.
fn core_error(at: &str, e: CoreError, labels: &[String], invariants: &[String]) -> QcError {
    let label = |i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());
    let message = match e {
        CoreError::Jacobi { i, j, k } => {
            format!("Jacobi identity fails on the triple ({}, {}, {})", label(i), label(j), label(k))
        }
        CoreError::NotAntisymmetric { i, j } => {
            format!(
                "brackets [{}, {}] and [{}, {}] are not negatives of each other",
                label(i),
                label(j),
                label(j),
                label(i)
            )
        }
        CoreError::NotEquivariant { i, j } => {
            format!("{{H_{}, H_{}}} differs from the hamiltonian of [{}, {}]", label(i), label(j), label(i), label(j))
        }
        CoreError::GeneratorNotInvariant { index, basis } => format!(
            "invariant `{}` is not annihilated by ad({})",
            invariants.get(index).cloned().unwrap_or_else(|| index.to_string()),
            label(basis)
        ),
        CoreError::ClassicalPartMismatch { index } => {
            format!("quantum hamiltonian `{}` does not reduce to its classical part mod hbar", label(index))
        }
        other => other.to_string(),
    };
    QcError::Validation(format!("{at}: {message}"))
}

fn unique(at: &str, names: &[String]) -> Result<(), QcError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(invalid(format!("{at}: duplicate name `{n}`")));
        }
    }
    Ok(())
}
