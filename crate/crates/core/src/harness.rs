//! Verification driver: one check per (suite, algebra), JSON-lines reports
//! and structure-constant export.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgElem, Algebra};
use crate::conformal::{
    bracket, dual_operator, e6_closure, e6_generator_basis, e7_basis, freud_dim, freudenthal_action, matrix_action,
    matrixize, quartic, quartic_linear_coefficient, super_freudenthal, ConformalError, E6Closure, E6Generators,
    E6Kind, E7Basis, E7Elem, E7Family, FreudVec, Mat6, MatrixizedBasis,
};
use crate::cubie::{
    assemble_cube, cubie_freudenthal_commuting, e6_cubie_action, e6_cubie_image, epsilon_identity_suite, hodge,
    naive_action, naive_action_linear, pstar_tensor, quartic_tensor, sided_action, CubieError,
};
use crate::jordan::HermMat;
use crate::linalg::{close_under_bracket, Echelon, SparseMat};
use crate::random::Sampler;
use crate::rational::Rational;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SAMPLES: usize = 20;

/// Expected bracket-closure dimension of e₇'s real form for ℝ, ℂ, ℍ, 𝕆.
pub const E7_DIMS: [usize; 4] = [21, 35, 66, 133];
/// Expected dimension of the e₆ closure and its derived part.
pub const E6_DIMS: [usize; 4] = [8, 16, 35, 78];
pub const E6_DERIVED: [usize; 4] = [0, 0, 3, 14];
pub const REP_DIMS: [usize; 4] = [14, 20, 32, 56];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Cubie(#[from] CubieError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub algebra: Algebra,
    pub status: Status,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

/// Suites in report order; each maps to one acceptance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dims,
    E6,
    RepDim,
    Quartic,
    Lemma1,
    Lemma2,
    Lemma3,
    Theorem,
    Equivalence,
    Jacobi,
    Symplectic,
    Constants,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Dims,
        Suite::E6,
        Suite::RepDim,
        Suite::Quartic,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Theorem,
        Suite::Equivalence,
        Suite::Jacobi,
        Suite::Symplectic,
        Suite::Constants,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dims => "dims",
            Suite::E6 => "e6",
            Suite::RepDim => "repdim",
            Suite::Quartic => "quartic",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Theorem => "theorem",
            Suite::Equivalence => "equivalence",
            Suite::Jacobi => "jacobi",
            Suite::Symplectic => "symplectic",
            Suite::Constants => "constants",
            Suite::Identities => "identities",
        }
    }

    /// Acceptance criterion number (1-based).
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|s| *s == self).expect("listed") + 1
    }

    /// The naive-action equivalence and the tensor constants are only
    /// defined over the commutative algebras.
    pub fn applies_to(self, alg: Algebra) -> bool {
        match self {
            Suite::Equivalence | Suite::Constants => matches!(alg, Algebra::Real | Algebra::Complex),
            _ => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub algebras: Vec<Algebra>,
    pub suites: Vec<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            algebras: Algebra::ALL.to_vec(),
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    pub fn single(alg: Algebra, suite: Suite) -> Self {
        RunConfig {
            algebras: vec![alg],
            suites: vec![suite],
            ..Self::default()
        }
    }
}

/// Lazily built per-algebra data shared across suites.
struct Context {
    alg: Algebra,
    gens: E6Generators,
    closure: OnceCell<E6Closure>,
    basis: OnceCell<E7Basis>,
    matrixized: OnceCell<MatrixizedBasis>,
}

impl Context {
    fn new(alg: Algebra) -> Self {
        Context {
            alg,
            gens: e6_generator_basis(alg),
            closure: OnceCell::new(),
            basis: OnceCell::new(),
            matrixized: OnceCell::new(),
        }
    }

    fn closure(&self) -> Result<&E6Closure, HarnessError> {
        if let Some(c) = self.closure.get() {
            return Ok(c);
        }
        let c = e6_closure(self.alg)?;
        Ok(self.closure.get_or_init(|| c))
    }

    fn basis(&self) -> Result<&E7Basis, HarnessError> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = e7_basis(self.alg)?;
        Ok(self.basis.get_or_init(|| b))
    }

    fn matrixized(&self) -> Result<&MatrixizedBasis, HarnessError> {
        if let Some(m) = self.matrixized.get() {
            return Ok(m);
        }
        let m = self.basis()?.matrixized()?;
        Ok(self.matrixized.get_or_init(|| m))
    }

    fn idx(&self) -> usize {
        self.alg.level() as usize
    }
}

struct Check {
    suite: Suite,
    alg: Algebra,
}

impl Check {
    fn result(&self, status: Status, detail: impl Into<String>, data: Option<Value>) -> CheckResult {
        CheckResult {
            check_id: self.suite.name().to_string(),
            algebra: self.alg,
            status,
            detail: detail.into(),
            data,
        }
    }

    fn pass_if(&self, ok: bool, detail: impl Into<String>, data: Value) -> CheckResult {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.result(status, detail, Some(data))
    }
}

/// Runs every selected suite on every selected algebra, in suite order then
/// algebra order.
pub fn verify_all(config: &RunConfig) -> Vec<CheckResult> {
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut algebras = config.algebras.clone();
    algebras.sort();
    algebras.dedup();
    let mut contexts: BTreeMap<Algebra, Context> = BTreeMap::new();
    let mut out = Vec::new();
    for suite in suites {
        for &alg in &algebras {
            if !suite.applies_to(alg) {
                continue;
            }
            let ctx = contexts.entry(alg).or_insert_with(|| Context::new(alg));
            let check = Check { suite, alg };
            let mut sampler = Sampler::derived(config.seed, &format!("{suite}/{}", alg.symbol()));
            let result = run_suite(&check, ctx, &mut sampler, config.samples)
                .unwrap_or_else(|e| check.result(Status::Fail, format!("error: {e}"), None));
            out.push(result);
        }
    }
    out
}

fn run_suite(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    match check.suite {
        Suite::Dims => check_dims(check, ctx),
        Suite::E6 => check_e6(check, ctx),
        Suite::RepDim => Ok(check_repdim(check, ctx)),
        Suite::Quartic => check_quartic(check, ctx, s, samples),
        Suite::Lemma1 => check_lemma1(check, ctx, s, samples),
        Suite::Lemma2 => check_lemma2(check, s, samples),
        Suite::Lemma3 => check_lemma3(check, s, samples),
        Suite::Theorem => check_theorem(check, ctx, s, samples),
        Suite::Equivalence => check_equivalence(check, ctx, s, samples),
        Suite::Jacobi => check_jacobi(check, ctx),
        Suite::Symplectic => check_symplectic(check, ctx),
        Suite::Constants => check_constants(check, ctx, s, samples),
        Suite::Identities => check_identities(check, ctx, s, samples),
    }
}

fn check_dims(check: &Check, ctx: &Context) -> Result<CheckResult, HarnessError> {
    let closure = close_under_bracket(&ctx.matrixized()?.mats)?;
    let expected = E7_DIMS[ctx.idx()];
    let dim = closure.dim();
    Ok(check.pass_if(
        dim == expected,
        format!("bracket closure of the matrixized basis has dimension {dim} (expected {expected})"),
        json!({"dim": dim, "expected": expected, "basis": ctx.basis()?.len()}),
    ))
}

fn check_e6(check: &Check, ctx: &Context) -> Result<CheckResult, HarnessError> {
    let c = ctx.closure()?;
    let boosts = ctx.gens.boosts;
    let rotations = ctx.gens.ops.len() - boosts;
    let (dim, derived) = (c.dim(), c.derived());
    let k = ctx.alg.dim();
    let ok = dim == E6_DIMS[ctx.idx()]
        && derived == E6_DERIVED[ctx.idx()]
        && boosts == 3 * k + 2
        && rotations == 5 * k - 2;
    Ok(check.pass_if(
        ok,
        format!("{boosts} boosts + {rotations} rotations close to {dim} with {derived} derived elements"),
        json!({"boosts": boosts, "rotations": rotations, "dim": dim, "derived": derived,
               "expected_dim": E6_DIMS[ctx.idx()], "expected_derived": E6_DERIVED[ctx.idx()]}),
    ))
}

fn check_repdim(check: &Check, ctx: &Context) -> CheckResult {
    let alg = ctx.alg;
    let d = freud_dim(alg);
    let basis = FreudVec::basis(alg);
    let round_trip = basis
        .iter()
        .all(|b| FreudVec::from_coords(alg, &b.coords()).as_ref() == Ok(b));
    let expected = REP_DIMS[ctx.idx()];
    check.pass_if(
        d == expected && basis.len() == d && round_trip,
        format!("FreudVec has real dimension {d} (expected {expected})"),
        json!({"dim": d, "expected": expected}),
    )
}

fn check_quartic(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let basis = ctx.basis()?;
    let mut evaluated = 0usize;
    let mut first_failure = None;
    for _ in 0..samples {
        let pv = s.freud_vec(ctx.alg);
        for (i, theta) in basis.elems.iter().enumerate() {
            let dir = freudenthal_action(theta, &pv)?;
            let c1 = quartic_linear_coefficient(&pv, &dir)?;
            evaluated += 1;
            if !c1.is_zero() && first_failure.is_none() {
                first_failure = Some(json!({"basis": i, "label": basis.labels[i], "coefficient": c1}));
            }
        }
    }
    Ok(check.pass_if(
        first_failure.is_none(),
        format!("t-linear coefficient of J(P + tΘP) vanished in {evaluated} exact interpolations"),
        json!({"evaluations": evaluated, "first_failure": first_failure}),
    ))
}

fn check_lemma1(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (i, op) in ctx.gens.ops.iter().enumerate() {
        let phi = op.matrix_form()?;
        for _ in 0..samples {
            let x = s.herm_mat(ctx.alg);
            let image = e6_cubie_image(phi, &x)?;
            let ok = image == e6_cubie_action(phi, &x)? && image == hodge(&op.apply(&x));
            compared += 1;
            if !ok && mismatches.len() < 5 {
                mismatches.push(ctx.gens.labels[i].clone());
            }
        }
    }
    Ok(check.pass_if(
        mismatches.is_empty(),
        format!(
            "cubie image of φ(X) matched the contraction formula for {} generators x {samples} samples",
            ctx.gens.ops.len()
        ),
        json!({"generators": ctx.gens.ops.len(), "comparisons": compared, "mismatches": mismatches}),
    ))
}

fn check_lemma2(check: &Check, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let alg = check.alg;
    let mut ok = true;
    let mut q_from_p_matches = 0;
    let mut p_ne_q = 0;
    for _ in 0..samples {
        let pv = s.freud_vec(alg);
        let rho = s.nonzero_rational();
        let theta = E7Elem::dilation(alg, rho.clone());
        let image = freudenthal_action(&theta, &pv)?;
        ok &= naive_action(&theta, &assemble_cube(&pv))? == assemble_cube(&image);
        ok &= image.p == -(&rho * &pv.p) && image.q == &rho * &pv.q;
        if pv.p != pv.q {
            p_ne_q += 1;
            if image.q == &rho * &pv.p {
                q_from_p_matches += 1;
            }
        }
    }
    Ok(check.pass_if(
        ok,
        "dilation: naive cube action equals the assembled action; p -> -rho p, q -> +rho q \
         (the variant q -> +rho p does not hold)",
        json!({"samples": samples, "q_rule": "q -> rho*q",
               "variant_q_to_rho_p_matches": q_from_p_matches, "variant_tested_on": p_ne_q}),
    ))
}

fn check_lemma3(check: &Check, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let alg = check.alg;
    let mut failures = 0;
    for _ in 0..samples {
        let pv = s.freud_vec(alg);
        let cube = assemble_cube(&pv);
        for theta in [
            E7Elem::translation(s.real_herm_mat(alg)),
            E7Elem::conformal_translation(s.real_herm_mat(alg)),
        ] {
            if naive_action(&theta, &cube)? != assemble_cube(&freudenthal_action(&theta, &pv)?) {
                failures += 1;
            }
        }
    }
    Ok(check.pass_if(
        failures == 0,
        format!("real translations (A and B) on {samples} random P: naive cube action matches in all but {failures}"),
        json!({"comparisons": 2 * samples, "failures": failures}),
    ))
}

/// Basis translations whose matrix has only real entries.
fn real_translations(alg: Algebra) -> Vec<E7Elem> {
    let reals: Vec<HermMat> = HermMat::basis(alg).into_iter().filter(HermMat::is_real).collect();
    reals
        .iter()
        .cloned()
        .map(E7Elem::translation)
        .chain(reals.iter().cloned().map(E7Elem::conformal_translation))
        .collect()
}

/// `λ` with `m = λ·target`, when it exists.
fn scalar_ratio(m: &SparseMat, target: &SparseMat) -> Option<Rational> {
    let (i, j, t) = target
        .to_dense()
        .into_iter()
        .enumerate()
        .find(|(_, x)| !x.is_zero())
        .map(|(idx, x)| (idx / target.cols(), idx % target.cols(), x))?;
    let lambda = m.get(i, j) / t;
    (*m == target.scale(&lambda)).then_some(lambda)
}

fn check_theorem(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let alg = ctx.alg;
    let mut acting: Vec<(String, E7Elem)> = ctx
        .gens
        .ops
        .iter()
        .zip(&ctx.gens.labels)
        .map(|(op, l)| (l.clone(), E7Elem::from_phi(op.clone())))
        .collect();
    acting.push(("dilation".into(), E7Elem::dilation(alg, Rational::ONE)));
    for (i, t) in real_translations(alg).into_iter().enumerate() {
        acting.push((format!("real translation #{i}"), t));
    }

    let mut sided_failures = Vec::new();
    for _ in 0..samples {
        let pv = s.freud_vec(alg);
        let cube = assemble_cube(&pv);
        for (label, theta) in &acting {
            let want = assemble_cube(&freudenthal_action(theta, &pv)?);
            let ok = matches!(sided_action(theta, &cube), Ok(c) if c == want);
            if !ok && sided_failures.len() < 5 {
                sided_failures.push(label.clone());
            }
        }
    }

    let identity = E7Elem::translation(HermMat::identity(alg));
    let mut exact = 0;
    let mut ratios: Vec<String> = Vec::new();
    let boosts = &ctx.gens.ops[..ctx.gens.boosts];
    for op in boosts {
        let q = HermMat::from_mat3(op.matrix_form()?.clone()).map_err(ConformalError::from)?;
        let comm = bracket(&identity, &E7Elem::from_phi(op.clone()))?.mat;
        let target = matrixize(&E7Elem::translation(q))?.mat;
        if comm == target {
            exact += 1;
        }
        let r = scalar_ratio(&comm, &target).map_or("none".to_string(), |r| r.to_string());
        if !ratios.contains(&r) {
            ratios.push(r);
        }
    }

    let mats = acting
        .iter()
        .map(|(_, t)| matrixize(t).map(|r| r.mat))
        .collect::<Result<Vec<_>, _>>()?;
    let reached = close_under_bracket(&mats)?.dim();
    let expected = E7_DIMS[ctx.idx()];

    let sided_ok = sided_failures.is_empty();
    let commutator_ok = exact == boosts.len();
    let closure_ok = reached == expected;
    let detail = format!(
        "sided action {}; [(0,0,I,0),(Q,0,0,0)] = (0,0,Q,0) exactly for {exact}/{} boosts \
         (observed [..] = λ·(0,0,Q,0) with λ in {{{}}}); closure of sided-action generators reaches {reached}/{expected}",
        if sided_ok { "matches" } else { "mismatches" },
        boosts.len(),
        ratios.join(", "),
    );
    Ok(check.pass_if(
        sided_ok && commutator_ok && closure_ok,
        detail,
        json!({
            "sided": {"generators": acting.len(), "samples": samples, "failures": sided_failures},
            "commutator": {"boosts": boosts.len(), "exact": exact, "observed_ratios": ratios},
            "closure": {"reached": reached, "expected": expected},
        }),
    ))
}

fn check_equivalence(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let basis = ctx.basis()?;
    let mut compared = 0;
    let mut failures = Vec::new();
    for _ in 0..samples {
        let pv = s.freud_vec(ctx.alg);
        let cube = assemble_cube(&pv);
        for (i, theta) in basis.elems.iter().enumerate() {
            let want = assemble_cube(&freudenthal_action(theta, &pv)?);
            let naive = naive_action(theta, &cube)?;
            let ok = naive == want && sided_action(theta, &cube)? == naive;
            compared += 1;
            if !ok && failures.len() < 5 {
                failures.push(basis.labels[i].clone());
            }
        }
    }
    Ok(check.pass_if(
        failures.is_empty(),
        format!("naive and sided cube actions equal the assembled action on {compared} (Θ, P) pairs"),
        json!({"comparisons": compared, "failures": failures}),
    ))
}

/// Searches basis pairs in index order for a naive-action commutator outside
/// the span of naive-action images. Commutative algebras are searched
/// exhaustively.
fn check_jacobi(check: &Check, ctx: &Context) -> Result<CheckResult, HarnessError> {
    let basis = ctx.basis()?;
    let indexed: Vec<(usize, SparseMat)> = basis
        .elems
        .iter()
        .enumerate()
        .filter(|(_, t)| t.has_matrix_form())
        .map(|(i, t)| Ok((i, naive_action_linear(&t.block_form()?)?)))
        .collect::<Result<_, HarnessError>>()?;
    let n = 20 * ctx.alg.dim();
    let mut span = Echelon::new(n * n);
    for (_, m) in &indexed {
        span.insert(&m.flatten())?;
    }
    let mut pairs = 0usize;
    for (x, (i, mi)) in indexed.iter().enumerate() {
        for (j, mj) in &indexed[x + 1..] {
            pairs += 1;
            let comm = mi.commutator(mj)?;
            if !span.contains(&comm.flatten())? {
                let data = json!({
                    "theta1": {"index": i, "label": basis.labels[*i]},
                    "theta2": {"index": j, "label": basis.labels[*j]},
                    "pairs_checked": pairs, "span_rank": span.rank(),
                });
                let detail = format!(
                    "naive-action commutator of [{}] and [{}] leaves the span of naive images (rank {})",
                    basis.labels[*i],
                    basis.labels[*j],
                    span.rank()
                );
                let status = if matches!(ctx.alg, Algebra::Real | Algebra::Complex) {
                    Status::Fail
                } else {
                    Status::Witness
                };
                return Ok(check.result(status, detail, Some(data)));
            }
        }
    }
    let commutative = matches!(ctx.alg, Algebra::Real | Algebra::Complex);
    Ok(check.pass_if(
        commutative,
        format!("all {pairs} naive-action commutators stay in the span of naive images"),
        json!({"pairs_checked": pairs, "span_rank": span.rank()}),
    ))
}

fn check_symplectic(check: &Check, ctx: &Context) -> Result<CheckResult, HarnessError> {
    let basis = ctx.basis()?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, theta) in basis.elems.iter().enumerate() {
        if basis.families[i] == E7Family::E6 && !matches!(theta.phi.kind, E6Kind::Boost | E6Kind::Rotation) {
            continue;
        }
        checked += 1;
        if !theta.block_form()?.symplectic_defect().is_zero() && failures.len() < 5 {
            failures.push(basis.labels[i].clone());
        }
    }
    Ok(check.pass_if(
        failures.is_empty(),
        format!("ΘΩ + ΩΘ† = 0 for {checked} boost/rotation/translation/dilation generators"),
        json!({"checked": checked, "failures": failures}),
    ))
}

fn complex_ratio(num: &AlgElem, den: &AlgElem) -> Option<AlgElem> {
    let inv = den.norm().recip()?;
    Some(num * &den.conj().scale(&inv))
}

fn check_constants(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let alg = ctx.alg;
    let block = |pv: &FreudVec| -> Result<Mat6, HarnessError> {
        let ps = super_freudenthal(pv)?;
        let phi = ps.phi.clone().with_recovered_matrix(&ctx.gens)?;
        Ok(E7Elem { phi, ..ps }.block_form()?)
    };
    let mut c: Option<AlgElem> = None;
    let mut c_prime: Option<AlgElem> = None;
    let (mut c_fail, mut cp_fail, mut drawn) = (0, 0, 0);
    // Determine on the first usable sample, then verify on `samples` more.
    while drawn < samples + 1 || c.is_none() || c_prime.is_none() {
        let pv = s.freud_vec(alg);
        drawn += 1;
        let cube = assemble_cube(&pv);
        let m = pstar_tensor(&cube);
        let b = block(&pv)?;
        let jt = quartic_tensor(&cube);
        let j = AlgElem::real(alg, quartic(&pv));
        let was_known = (c.is_some(), c_prime.is_some());
        if c.is_none() {
            c = (0..36)
                .map(|i| (i / 6, i % 6))
                .find(|&(i, k)| !b.get(i, k).is_zero())
                .and_then(|(i, k)| complex_ratio(m.get(i, k), b.get(i, k)));
        }
        if c_prime.is_none() {
            c_prime = complex_ratio(&jt, &j);
        }
        if was_known.0 {
            if let Some(c) = &c {
                c_fail += (m != b.scale_left(c)) as usize;
            }
        }
        if was_known.1 {
            if let Some(cp) = &c_prime {
                cp_fail += (jt != cp * &j) as usize;
            }
        }
        if drawn > 10 * (samples + 1) {
            break;
        }
    }
    let ok = c.is_some() && c_prime.is_some() && c_fail == 0 && cp_fail == 0;
    let show = |x: &Option<AlgElem>| x.as_ref().map_or("undetermined".to_string(), |v| v.to_string());
    Ok(check.pass_if(
        ok,
        format!(
            "pstar tensor = c·blockform(P∗P) with c = {}; quartic tensor = c'·J with c' = {}",
            show(&c),
            show(&c_prime)
        ),
        json!({"c": show(&c), "c_prime": show(&c_prime), "verified_samples": samples,
               "c_failures": c_fail, "c_prime_failures": cp_fail}),
    ))
}

fn check_identities(check: &Check, ctx: &Context, s: &mut Sampler, samples: usize) -> Result<CheckResult, HarnessError> {
    let alg = ctx.alg;
    let eps = epsilon_identity_suite();

    let mut duality = true;
    for op in &ctx.closure()?.ops {
        let x = s.herm_mat(alg);
        let y = s.herm_mat(alg);
        let sum = op.apply(&x).trace_form(&y).map_err(ConformalError::from)?
            + x.trace_form(&op.apply_dual(&y)).map_err(ConformalError::from)?;
        duality &= sum.is_zero();
    }
    let mut dual_is_minus_dagger = true;
    for op in &ctx.gens.ops {
        let phi = op.matrix_form()?;
        dual_is_minus_dagger &= matrix_action(&phi.dagger().neg())? == dual_operator(alg, &op.act);
    }

    let (mut composition, mut alternative, mut jordan_freudenthal_identity, mut commuting) = (true, true, true, true);
    for _ in 0..samples {
        let (x, y) = (s.alg_elem(alg), s.alg_elem(alg));
        composition &= (&x * &y).norm() == x.norm() * y.norm();
        alternative &= x.associator(&x, &y).map(|a| a.is_zero()).unwrap_or(false)
            && y.associator(&x, &x).map(|a| a.is_zero()).unwrap_or(false);

        let (a, b, xm) = (s.herm_mat(alg), s.herm_mat(alg), s.herm_mat(alg));
        let lhs = a.jordan(&b).and_then(|ab| ab.freudenthal(&xm)).map(|m| m.scale(&Rational::from_int(-1)));
        let rhs = b
            .sub(&HermMat::identity(alg).scale(&b.trace()))
            .and_then(|shift| shift.jordan(&a.freudenthal(&xm)?))
            .and_then(|t1| t1.add(&a.freudenthal(&b.jordan(&xm)?)?));
        jordan_freudenthal_identity &= matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r);

        let (xr, ym) = (s.real_herm_mat(alg), s.herm_mat(alg));
        commuting &= matches!(
            (cubie_freudenthal_commuting(&xr, &ym), xr.freudenthal(&ym)),
            (Ok(l), Ok(r)) if l == r
        );
    }
    let ok = eps.all_standard_ok()
        && duality
        && dual_is_minus_dagger
        && composition
        && alternative
        && jordan_freudenthal_identity
        && commuting;
    let detail = format!(
        "epsilon {}; duality {}; φ' = -φ† {}; composition {}; alternativity {}; (A∘B)∗X identity {}; \
         commuting Freudenthal formula {}; cyclic six-term variant differs at {} of 729 index tuples",
        eps.all_standard_ok(),
        duality,
        dual_is_minus_dagger,
        composition,
        alternative,
        jordan_freudenthal_identity,
        commuting,
        eps.cyclic_expansion_mismatches.len(),
    );
    Ok(check.pass_if(
        ok,
        detail,
        json!({
            "epsilon": {"full_contraction": eps.full_contraction, "single_free": eps.single_free_ok,
                        "double_free": eps.double_free_ok, "standard_expansion": eps.standard_expansion_ok,
                        "cyclic_expansion_mismatches": eps.cyclic_expansion_mismatches.len(),
                        "first_cyclic_mismatch": eps.cyclic_expansion_mismatches.first()},
            "duality_ops": ctx.closure()?.dim(),
            "duality": duality, "dual_is_minus_dagger": dual_is_minus_dagger,
            "composition": composition, "alternativity": alternative,
            "jordan_freudenthal_identity": jordan_freudenthal_identity, "commuting_freudenthal": commuting,
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub witness: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let mut s = Summary {
        total: results.len(),
        ..Summary::default()
    };
    for r in results {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Witness => s.witness += 1,
        }
    }
    s
}

/// One JSON object per line, then `{"summary": {...}}`.
pub fn write_report<W: Write>(results: &[CheckResult], mut w: W) -> std::io::Result<()> {
    for r in results {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    serde_json::to_writer(&mut w, &json!({"summary": summarize(results)}))?;
    writeln!(w)
}

pub fn report_string(results: &[CheckResult]) -> String {
    let mut buf = Vec::new();
    write_report(results, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("utf8")
}

/// Nonzero structure constants `c_ij^k` of the e₇ basis:
/// `[Θᵢ, Θⱼ] = Σₖ c_ij^k Θₖ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    pub alg: Algebra,
    pub dim: usize,
    pub entries: Vec<(usize, usize, usize, Rational)>,
}

pub fn export_structure_constants(alg: Algebra) -> Result<StructureConstants, HarnessError> {
    let mb = e7_basis(alg)?.matrixized()?;
    let n = mb.mats.len();
    let mut table: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let comm = mb.mats[i].commutator(&mb.mats[j])?;
            let coords = mb.coordinates(&comm)?.expect("closed basis");
            table.insert((i, j), coords);
        }
    }
    for ((i, j), c) in &table {
        let other = &table[&(*j, *i)];
        assert!(c.iter().zip(other).all(|(a, b)| *a == -b.clone()), "antisymmetry of c_{i}{j}");
    }
    let entries = table
        .into_iter()
        .flat_map(|((i, j), c)| {
            c.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(move |(k, x)| (i, j, k, x))
        })
        .collect();
    Ok(StructureConstants { alg, dim: n, entries })
}

impl StructureConstants {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,j,k,c")?;
        for (i, j, k, c) in &self.entries {
            writeln!(w, "{i},{j},{k},{}", c.to_fraction_string())?;
        }
        Ok(())
    }

    pub fn dense(&self) -> Vec<Rational> {
        let n = self.dim;
        let mut v = vec![Rational::ZERO; n * n * n];
        for (i, j, k, c) in &self.entries {
            v[(i * n + j) * n + k] = c.clone();
        }
        v
    }
}

/// Check identifiers in report order.
pub fn suite_names() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::Identities.criterion(), 13);
    }

    #[test]
    fn fast_suites_pass_over_reals() {
        let cfg = RunConfig {
            samples: 3,
            algebras: vec![Algebra::Real],
            suites: vec![Suite::Dims, Suite::E6, Suite::RepDim, Suite::Symplectic, Suite::Jacobi],
            ..RunConfig::default()
        };
        let results = verify_all(&cfg);
        assert_eq!(results.len(), 5);
        assert!(results.iter().all(|r| r.status == Status::Pass), "{results:#?}");
        assert_eq!(results[0].data.as_ref().unwrap()["dim"], 21);
    }

    #[test]
    fn non_applicable_suites_are_skipped() {
        let cfg = RunConfig {
            algebras: vec![Algebra::Quaternion],
            suites: vec![Suite::Equivalence, Suite::Constants],
            ..RunConfig::default()
        };
        assert!(verify_all(&cfg).is_empty());
    }

    #[test]
    fn report_has_trailing_summary() {
        let cfg = RunConfig::single(Algebra::Complex, Suite::RepDim);
        let text = report_string(&verify_all(&cfg));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let summary: Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(summary["summary"]["pass"], 1);
    }

    #[test]
    fn structure_constants_over_reals() {
        let sc = export_structure_constants(Algebra::Real).unwrap();
        assert_eq!(sc.dim, 21);
        assert!(sc.entries.iter().all(|(i, j, _, _)| i != j));
        let mut csv = Vec::new();
        sc.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with("i,j,k,c\n"));
    }
}
