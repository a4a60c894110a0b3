//! Exhaustive grid audits of the descent-modulus axioms.
//!
//! Each check quantifies over every field of a [`FunctionGrid`] (and over
//! pairs, scalars or shifts where the axiom asks for them) and reports
//! either `HoldsOnGrid` or `Fails` with a re-checkable witness. A grid
//! verdict is never a proof: the axioms quantify over all real-valued
//! functions and the grid is a finite probe.

use crate::error::{Error, Result};
use crate::exact::{rat, rint, Exact, Rat};
use crate::exec::Executor;
use crate::fgrid::FunctionGrid;
use crate::field::{ExtendedField, ScalarField};
use crate::ops::DescentOperator;
use num_traits::{One, Signed};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// (D1) zero descent at global minima.
    PreservesMinima,
    /// (D2) monotone under pointwise positive-part domination.
    Monotone,
    /// (D3) strictly increasing under scaling by `r > 1`.
    ScalarMonotone,
    /// `T[f + c] = T[f]`.
    TranslationInvariant,
    /// `T[rf] = r^p T[f]`.
    Homogeneous,
}

impl Axiom {
    pub fn label(&self) -> &'static str {
        match self {
            Axiom::PreservesMinima => "D1",
            Axiom::Monotone => "D2",
            Axiom::ScalarMonotone => "D3",
            Axiom::TranslationInvariant => "translation",
            Axiom::Homogeneous => "homogeneity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsOnGrid,
    Fails,
}

/// A concrete counterexample; enough data to replay the violation.
#[derive(Clone, Debug)]
pub struct Witness {
    pub f: ScalarField,
    pub g: Option<ScalarField>,
    pub vertex: usize,
    pub scalar: Option<Rat>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub cases: u64,
}

impl AxiomReport {
    fn holds(axiom: Axiom, cases: u64) -> Self {
        AxiomReport { axiom, verdict: Verdict::HoldsOnGrid, witness: None, cases }
    }

    fn fails(axiom: Axiom, cases: u64, witness: Witness) -> Self {
        AxiomReport { axiom, verdict: Verdict::Fails, witness: Some(witness), cases }
    }

    pub fn holds_on_grid(&self) -> bool {
        self.verdict == Verdict::HoldsOnGrid
    }
}

/// Scalar/shift samples used by the audits.
#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Scaling factors `r > 1` for the (D3) probe.
    pub rset: Vec<Rat>,
    /// Shifts for the translation probe.
    pub cset: Vec<Rat>,
    /// Positive factors for the homogeneity probe.
    pub hset: Vec<Rat>,
    pub exec: Executor,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            rset: vec![rat(3, 2), rint(2), rint(5)],
            cset: vec![rint(1), rint(-2), rat(1, 3)],
            hset: vec![rat(1, 2), rint(2), rint(3)],
            exec: Executor::default(),
        }
    }
}

enum Hit {
    Violation(Box<Witness>),
    Error(Error),
}

fn settle(axiom: Axiom, cases: u64, hit: Option<Hit>) -> Result<AxiomReport> {
    match hit {
        None => Ok(AxiomReport::holds(axiom, cases)),
        Some(Hit::Violation(w)) => Ok(AxiomReport::fails(axiom, cases, *w)),
        Some(Hit::Error(e)) => Err(e),
    }
}

/// Evaluate the operator on every grid field once.
fn eval_table(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    exec: &Executor,
) -> Result<Vec<ExtendedField>> {
    let n = grid.len_checked()?;
    let results = exec.map_collect(n, |i| op.eval(&grid.field(i)));
    results.into_iter().collect()
}

/// (D1): `x ∈ argmin f` forces `T[f](x) = 0`.
///
/// The scan is vertex-major so the reported witness names the smallest
/// violating vertex.
pub fn check_preserves_minima(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
) -> Result<AxiomReport> {
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let nv = grid.space().len() as u64;
    let table = eval_table(op, grid, &opts.exec)?;
    let hit = opts.exec.find_first(nv * nf, |idx| {
        let x = (idx / nf) as usize;
        let fid = idx % nf;
        let f = grid.field(fid);
        if f.value(x) != f.min() {
            return None;
        }
        let v = table[fid as usize].value(x);
        if v.is_zero() {
            None
        } else {
            Some(Hit::Violation(Box::new(Witness {
                f,
                g: None,
                vertex: x,
                scalar: None,
                note: format!("minimum of f but T[f](x) = {v}"),
            })))
        }
    });
    settle(Axiom::PreservesMinima, nv * nf, hit)
}

/// (D2): positive-part domination forces `T[f](x) ≥ T[g](x)`; every strict
/// gap is cross-checked against the one-step descent form.
pub fn check_monotone(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
) -> Result<AxiomReport> {
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let pairs = nf
        .checked_mul(nf)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, cap: 0 })?;
    let table = eval_table(op, grid, &opts.exec)?;
    let nv = grid.space().len();
    let hit = opts.exec.find_first(pairs, |idx| {
        let fid = idx / nf;
        let gid = idx % nf;
        let f = grid.field(fid);
        let g = grid.field(gid);
        for x in 0..nv {
            let dominates =
                (0..nv).all(|z| f.drop_pos(x, z) >= g.drop_pos(x, z));
            let tf = table[fid as usize].value(x);
            let tg = table[gid as usize].value(x);
            let ord = match tf.try_cmp(tg) {
                Ok(o) => o,
                Err(e) => return Some(Hit::Error(e)),
            };
            if dominates && ord == Ordering::Less {
                return Some(Hit::Violation(Box::new(Witness {
                    f,
                    g: Some(g),
                    vertex: x,
                    scalar: None,
                    note: format!("f dominates g at x but T[f](x) = {tf} < T[g](x) = {tg}"),
                })));
            }
            // one-step form: a strict gap needs a strictly lower z with a
            // strictly larger drop
            if ord == Ordering::Greater {
                let found = (0..nv).any(|z| {
                    f.value(z) < f.value(x)
                        && f.value(x) - f.value(z) > g.value(x) - g.value(z)
                });
                if !found {
                    return Some(Hit::Violation(Box::new(Witness {
                        f,
                        g: Some(g),
                        vertex: x,
                        scalar: None,
                        note: "strict gap without a one-step descent certificate".into(),
                    })));
                }
            }
        }
        None
    });
    settle(Axiom::Monotone, pairs, hit)
}

/// Sampled variant of [`check_monotone`] for grids whose full pair scan is
/// out of budget: audits a deterministic pseudorandom subset of ordered
/// pairs.
pub fn check_monotone_sampled(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
    pair_budget: u64,
    seed: u64,
) -> Result<AxiomReport> {
    use rand::{Rng, SeedableRng};
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let nv = grid.space().len();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let pairs: Vec<(u64, u64)> =
        (0..pair_budget).map(|_| (rng.gen_range(0..nf), rng.gen_range(0..nf))).collect();
    let hit = opts.exec.find_first(pair_budget, |idx| {
        let (fid, gid) = pairs[idx as usize];
        let f = grid.field(fid);
        let g = grid.field(gid);
        let (tf, tg) = match (op.eval(&f), op.eval(&g)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Some(Hit::Error(e)),
        };
        for x in 0..nv {
            let dominates = (0..nv).all(|z| f.drop_pos(x, z) >= g.drop_pos(x, z));
            if !dominates {
                continue;
            }
            match tf.value(x).try_cmp(tg.value(x)) {
                Ok(Ordering::Less) => {
                    return Some(Hit::Violation(Box::new(Witness {
                        f,
                        g: Some(g),
                        vertex: x,
                        scalar: None,
                        note: format!(
                            "f dominates g at x but T[f](x) = {} < T[g](x) = {}",
                            tf.value(x),
                            tg.value(x)
                        ),
                    })))
                }
                Ok(_) => {}
                Err(e) => return Some(Hit::Error(e)),
            }
        }
        None
    });
    settle(Axiom::Monotone, pair_budget, hit)
}

/// (D3): `0 < T[f](x) < ∞` forces `T[f](x) < T[rf](x)` for every `r > 1`
/// in the probe set; additionally `δ ↦ T[(1+δ)f](x)` must be strictly
/// increasing on a sampled segment `[0, r-1]` (the equivalent strict-growth
/// form).
pub fn check_scalar_monotone(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
) -> Result<AxiomReport> {
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let table = eval_table(op, grid, &opts.exec)?;
    let nv = grid.space().len();
    let rset: Vec<Rat> = opts.rset.iter().filter(|r| **r > Rat::one()).cloned().collect();
    if rset.is_empty() {
        return Err(Error::Other("scalar-monotonicity audit needs some r > 1".into()));
    }
    let cases = nf * rset.len() as u64;
    let hit = opts.exec.find_first(cases, |idx| {
        let fid = idx / rset.len() as u64;
        let r = &rset[(idx % rset.len() as u64) as usize];
        let f = grid.field(fid);
        let scaled = match op.eval(&f.scale(r)) {
            Ok(v) => v,
            Err(e) => return Some(Hit::Error(e)),
        };
        for x in 0..nv {
            let tf = table[fid as usize].value(x);
            if tf.is_zero() || !tf.is_finite() {
                continue;
            }
            match scaled.value(x).try_cmp(tf) {
                Ok(Ordering::Greater) => {}
                Ok(_) => {
                    return Some(Hit::Violation(Box::new(Witness {
                        f,
                        g: None,
                        vertex: x,
                        scalar: Some(r.clone()),
                        note: format!(
                            "T[rf](x) = {} is not above T[f](x) = {tf}",
                            scaled.value(x)
                        ),
                    })))
                }
                Err(e) => return Some(Hit::Error(e)),
            }
        }
        None
    });
    if hit.is_some() {
        return settle(Axiom::ScalarMonotone, cases, hit);
    }

    // strict-growth form, sampled along 1 + δ up to the largest probe factor
    let top = rset.iter().max().cloned().expect("nonempty rset");
    let factors: Vec<Rat> =
        (0..4i64).map(|k| Rat::one() + (&top - Rat::one()) * rat(k, 3)).collect();
    let growth_hit = opts.exec.find_first(nf, |fid| {
        let f = grid.field(fid);
        let ladder: Vec<ExtendedField> = match factors
            .iter()
            .map(|c| op.eval(&f.scale(c)))
            .collect::<Result<_>>()
        {
            Ok(v) => v,
            Err(e) => return Some(Hit::Error(e)),
        };
        for x in 0..nv {
            let tf = table[fid as usize].value(x);
            if tf.is_zero() || !tf.is_finite() {
                continue;
            }
            for w in ladder.windows(2) {
                let (a, b) = (w[0].value(x), w[1].value(x));
                if !b.is_finite() {
                    continue;
                }
                match a.try_cmp(b) {
                    Ok(Ordering::Less) => {}
                    Ok(_) => {
                        return Some(Hit::Violation(Box::new(Witness {
                            f,
                            g: None,
                            vertex: x,
                            scalar: Some(top.clone()),
                            note: format!(
                                "sampled growth stalls: {a} then {b} along 1+δ"
                            ),
                        })))
                    }
                    Err(e) => return Some(Hit::Error(e)),
                }
            }
        }
        None
    });
    settle(Axiom::ScalarMonotone, cases + nf, growth_hit)
}

/// `T[f + c] = T[f]` pointwise, exactly.
pub fn check_translation_invariance(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
) -> Result<AxiomReport> {
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let table = eval_table(op, grid, &opts.exec)?;
    let cases = nf * opts.cset.len() as u64;
    let nv = grid.space().len();
    let hit = opts.exec.find_first(cases, |idx| {
        let fid = idx / opts.cset.len() as u64;
        let c = &opts.cset[(idx % opts.cset.len() as u64) as usize];
        let f = grid.field(fid);
        let shifted = match op.eval(&f.shift(c)) {
            Ok(v) => v,
            Err(e) => return Some(Hit::Error(e)),
        };
        for x in 0..nv {
            match shifted.value(x).try_cmp(table[fid as usize].value(x)) {
                Ok(Ordering::Equal) => {}
                Ok(_) => {
                    return Some(Hit::Violation(Box::new(Witness {
                        f,
                        g: None,
                        vertex: x,
                        scalar: Some(c.clone()),
                        note: format!(
                            "T[f+c](x) = {} differs from T[f](x) = {}",
                            shifted.value(x),
                            table[fid as usize].value(x)
                        ),
                    })))
                }
                Err(e) => return Some(Hit::Error(e)),
            }
        }
        None
    });
    settle(Axiom::TranslationInvariant, cases, hit)
}

/// `T[rf] = r^p T[f]` pointwise for every `r > 0` in the probe set;
/// exact where values are radicals, bracket-tight otherwise.
pub fn check_homogeneity(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    degree: (i64, u32),
    opts: &AuditOptions,
) -> Result<AxiomReport> {
    grid.space().check_same(op.space(), "audit grid")?;
    let nf = grid.len_checked()?;
    let table = eval_table(op, grid, &opts.exec)?;
    let rset: Vec<Rat> = opts.hset.iter().filter(|r| r.is_positive()).cloned().collect();
    let cases = nf * rset.len() as u64;
    let nv = grid.space().len();
    let hit = opts.exec.find_first(cases, |idx| {
        let fid = idx / rset.len() as u64;
        let r = &rset[(idx % rset.len() as u64) as usize];
        let factor = match Exact::from_rat(r.clone()).pow_rat(degree.0, degree.1) {
            Ok(v) => v,
            Err(e) => return Some(Hit::Error(e)),
        };
        let f = grid.field(fid);
        let scaled = match op.eval(&f.scale(r)) {
            Ok(v) => v,
            Err(e) => return Some(Hit::Error(e)),
        };
        for x in 0..nv {
            let want = table[fid as usize].value(x).mul_exact(&factor);
            match scaled.value(x).try_cmp(&want) {
                Ok(Ordering::Equal) => {}
                Ok(_) => {
                    return Some(Hit::Violation(Box::new(Witness {
                        f,
                        g: None,
                        vertex: x,
                        scalar: Some(r.clone()),
                        note: format!(
                            "T[rf](x) = {} but r^p T[f](x) = {want}",
                            scaled.value(x)
                        ),
                    })))
                }
                Err(e) => return Some(Hit::Error(e)),
            }
        }
        None
    });
    settle(Axiom::Homogeneous, cases, hit)
}

/// The full descent-modulus audit: D1, D2, D3 and translation invariance.
pub fn audit_all(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    opts: &AuditOptions,
) -> Result<Vec<AxiomReport>> {
    Ok(vec![
        check_preserves_minima(op, grid, opts)?,
        check_monotone(op, grid, opts)?,
        check_scalar_monotone(op, grid, opts)?,
        check_translation_invariance(op, grid, opts)?,
    ])
}

impl Witness {
    /// Replay the violation against an operator; `true` means the witness
    /// still demonstrates a failure.
    pub fn recheck(&self, op: &dyn DescentOperator, axiom: Axiom) -> Result<bool> {
        let x = self.vertex;
        match axiom {
            Axiom::PreservesMinima => {
                let t = op.eval(&self.f)?;
                Ok(self.f.value(x) == self.f.min() && !t.value(x).is_zero())
            }
            Axiom::Monotone => {
                let g = self.g.as_ref().ok_or_else(|| {
                    Error::Other("monotonicity witness needs a second field".into())
                })?;
                let n = self.f.len();
                let dominates = (0..n).all(|z| self.f.drop_pos(x, z) >= g.drop_pos(x, z));
                let tf = op.eval(&self.f)?;
                let tg = op.eval(g)?;
                let lt = tf.value(x).try_cmp(tg.value(x))? == Ordering::Less;
                if dominates && lt {
                    return Ok(true);
                }
                // one-step certificate absent despite a strict gap
                if tf.value(x).try_cmp(tg.value(x))? == Ordering::Greater {
                    let found = (0..n).any(|z| {
                        self.f.value(z) < self.f.value(x)
                            && self.f.value(x) - self.f.value(z) > g.value(x) - g.value(z)
                    });
                    return Ok(!found);
                }
                Ok(false)
            }
            Axiom::ScalarMonotone => {
                let r = self.scalar.clone().ok_or_else(|| {
                    Error::Other("scalar witness needs the factor".into())
                })?;
                let tf = op.eval(&self.f)?;
                let tr = op.eval(&self.f.scale(&r))?;
                let v = tf.value(x);
                Ok(!v.is_zero()
                    && v.is_finite()
                    && tr.value(x).try_cmp(v)? != Ordering::Greater)
            }
            Axiom::TranslationInvariant => {
                let c = self.scalar.clone().ok_or_else(|| {
                    Error::Other("translation witness needs the shift".into())
                })?;
                let a = op.eval(&self.f)?;
                let b = op.eval(&self.f.shift(&c))?;
                Ok(a.value(x).try_cmp(b.value(x))? != Ordering::Equal)
            }
            Axiom::Homogeneous => Err(Error::Other(
                "homogeneity witnesses are rechecked through check_homogeneity".into(),
            )),
        }
    }
}
