//! Classification of homogeneous descent operators through their critical
//! maps: extraction of the active neighborhood system, the `Z1`–`Z5`
//! audits, the recursive evaluation on indicator data, and the
//! steepest-drop reconstruction.

use crate::error::{Error, Result};
use crate::exact::{rat, rint, Rat};
use crate::fgrid::FunctionGrid;
use crate::field::ScalarField;
use crate::neighbors::NeighborhoodSystem;
use crate::ops::{DescentOperator, OperatorHandle};
use crate::space::FiniteSpace;
use num_traits::Signed;

/// Default cap on `|V|` for subset enumeration (each vertex scans
/// `2^(|V|-1)` sets).
pub const DEFAULT_SUBSET_CAP: usize = 16;

/// Subsets of `V` as bitmasks.
pub type Mask = u32;

pub fn indicator_field(space: &FiniteSpace, mask: Mask) -> ScalarField {
    let vals = (0..space.len())
        .map(|i| if mask & (1 << i) != 0 { rint(1) } else { rint(0) })
        .collect();
    ScalarField::new(space.clone(), vals).expect("one value per vertex")
}

pub fn mask_of(vertices: &[usize]) -> Mask {
    vertices.iter().fold(0, |m, &v| m | (1 << v))
}

pub fn mask_members(mask: Mask, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

/// A critical map `Z: R^V -> P(V)*`, either the zero set of an operator or
/// a stored table on indicator functions extended by the split recursion.
pub enum CriticalMap<'a> {
    Operator(&'a dyn DescentOperator),
    Table(&'a IndicatorTable),
}

impl CriticalMap<'_> {
    pub fn space(&self) -> &FiniteSpace {
        match self {
            CriticalMap::Operator(op) => op.space(),
            CriticalMap::Table(t) => &t.space,
        }
    }

    /// The critical set of `f`; nonempty for maps coming from descent
    /// moduli.
    pub fn eval(&self, f: &ScalarField) -> Result<Vec<usize>> {
        match self {
            CriticalMap::Operator(op) => Ok(op.eval(f)?.zero_set()),
            CriticalMap::Table(t) => t.eval_recursive(f),
        }
    }

    fn eval_mask(&self, mask: Mask) -> Result<Mask> {
        let z = self.eval(&indicator_field(self.space(), mask))?;
        Ok(mask_of(&z))
    }
}

/// Critical-set values on every indicator function `1_K`.
#[derive(Clone, Debug)]
pub struct IndicatorTable {
    space: FiniteSpace,
    /// `table[mask]` = critical set of `1_mask`; `None` marks a missing
    /// entry.
    table: Vec<Option<Mask>>,
}

impl IndicatorTable {
    pub fn new(space: FiniteSpace, table: Vec<Option<Mask>>) -> Result<Self> {
        let n = space.len();
        if n > DEFAULT_SUBSET_CAP {
            return Err(Error::SubsetCapExceeded { size: n, cap: DEFAULT_SUBSET_CAP });
        }
        if table.len() != 1 << n {
            return Err(Error::Other(format!(
                "indicator table needs {} entries",
                1usize << n
            )));
        }
        Ok(IndicatorTable { space, table })
    }

    /// Record the operator's critical set on every indicator function.
    pub fn from_operator(op: &dyn DescentOperator) -> Result<Self> {
        let space = op.space().clone();
        let n = space.len();
        if n > DEFAULT_SUBSET_CAP {
            return Err(Error::SubsetCapExceeded { size: n, cap: DEFAULT_SUBSET_CAP });
        }
        let table = (0..(1u32 << n))
            .map(|mask| {
                let z = op.eval(&indicator_field(&space, mask))?.zero_set();
                Ok(Some(mask_of(&z)))
            })
            .collect::<Result<_>>()?;
        Ok(IndicatorTable { space, table })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    fn lookup(&self, mask: Mask) -> Result<Mask> {
        self.table
            .get(mask as usize)
            .copied()
            .flatten()
            .ok_or_else(|| Error::MissingTableEntry(format!("indicator mask {mask:#b}")))
    }

    /// The unique extension of the table consistent with translation,
    /// scaling and the min/max split: constants map to the full set via
    /// `1_V`, two-valued fields reduce to a lookup on `[f = max]`, and
    /// longer value lists split at the median value `r`, recursing on
    /// `min(f,r)` and `max(f,r)`.
    pub fn eval_recursive(&self, f: &ScalarField) -> Result<Vec<usize>> {
        self.space.check_same(f.space(), "recursive critical map")?;
        let n = self.space.len();
        let full: Mask = ((1u64 << n) - 1) as Mask;
        let mask = self.eval_recursive_mask(f, full)?;
        Ok(mask_members(mask, n))
    }

    fn eval_recursive_mask(&self, f: &ScalarField, full: Mask) -> Result<Mask> {
        let values = f.distinct_values();
        match values.len() {
            1 => self.lookup(full),
            2 => {
                let top = &values[1];
                let k: Vec<usize> =
                    (0..f.len()).filter(|&x| f.value(x) == top).collect();
                self.lookup(mask_of(&k))
            }
            n_vals => {
                // split at the median value, as in the reduction proof
                let k = n_vals.div_ceil(2);
                let r = &values[k - 1];
                let low = f.map(|v| if v <= r { v.clone() } else { r.clone() });
                let high = f.map(|v| if v >= r { v.clone() } else { r.clone() });
                let z_low = self.eval_recursive_mask(&low, full)?;
                let z_high = self.eval_recursive_mask(&high, full)?;
                let at_most: Mask =
                    mask_of(&(0..f.len()).filter(|&x| f.value(x) <= r).collect::<Vec<_>>());
                Ok((z_low & at_most) | (z_high & !at_most & full))
            }
        }
    }
}

/// The system extracted from a critical map, with the reconstruction
/// hypothesis evaluated pointwise.
#[derive(Clone, Debug)]
pub struct ExtractedSystem {
    pub space: FiniteSpace,
    /// `D_x`: intersection of all admitted sets `K ∋ x` with `x ∈ Z(1_K)`.
    pub sets: Vec<Vec<usize>>,
    /// Whether `D_x` is itself admitted (`x ∈ Z(1_{D_x})`).
    pub hypothesis: Vec<bool>,
    /// Vertices whose admitted family was empty (`D_x` defaulted to `V`).
    pub empty_families: Vec<usize>,
}

impl ExtractedSystem {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis.iter().all(|&h| h)
    }

    /// Package as a neighborhood system (requires `x ∈ D_x`, which holds
    /// whenever the admitted family was nonempty).
    pub fn system(&self) -> Result<NeighborhoodSystem> {
        NeighborhoodSystem::new(self.space.clone(), self.sets.clone())
    }
}

/// Extract `D_x = ∩ {K : x ∈ K ∩ Z(1_K)}` for every vertex.
pub fn extract_system(z: &CriticalMap) -> Result<ExtractedSystem> {
    let space = z.space().clone();
    let n = space.len();
    if n > DEFAULT_SUBSET_CAP {
        return Err(Error::SubsetCapExceeded { size: n, cap: DEFAULT_SUBSET_CAP });
    }
    let full: Mask = ((1u64 << n) - 1) as Mask;
    // cache Z on every indicator once
    let mut z_of: Vec<Mask> = Vec::with_capacity(1 << n);
    for mask in 0..=full {
        z_of.push(z.eval_mask(mask)?);
    }
    let mut sets = Vec::with_capacity(n);
    let mut hypothesis = Vec::with_capacity(n);
    let mut empty_families = Vec::new();
    for x in 0..n {
        let bit = 1u32 << x;
        let mut inter = full;
        let mut admitted_any = false;
        for mask in 0..=full {
            if mask & bit != 0 && z_of[mask as usize] & bit != 0 {
                admitted_any = true;
                inter &= mask;
            }
        }
        if !admitted_any {
            empty_families.push(x);
            inter = full;
        }
        hypothesis.push(z_of[inter as usize] & bit != 0);
        sets.push(mask_members(inter, n));
    }
    Ok(ExtractedSystem { space, sets, hypothesis, empty_families })
}

/// One critical-map axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZAxiom {
    /// `Z[f + c] = Z[f]`.
    Z1Translation,
    /// `Z[rf] = Z[f]` for `r > 0`.
    Z2Scaling,
    /// The min/max split identity at every probe value.
    Z3Split,
    /// `K^c ⊆ Z(1_K)` for every subset.
    Z4Complement,
    /// The admitted family at `x` is exactly the upward closure of `D_x`.
    Z5Upward,
}

impl ZAxiom {
    pub fn label(&self) -> &'static str {
        match self {
            ZAxiom::Z1Translation => "Z1",
            ZAxiom::Z2Scaling => "Z2",
            ZAxiom::Z3Split => "Z3",
            ZAxiom::Z4Complement => "Z4",
            ZAxiom::Z5Upward => "Z5",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZWitness {
    pub f: Option<ScalarField>,
    pub scalar: Option<Rat>,
    pub subset: Option<Vec<usize>>,
    pub vertex: Option<usize>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct ZAxiomReport {
    pub axiom: ZAxiom,
    pub holds: bool,
    pub witness: Option<ZWitness>,
    pub cases: u64,
}

/// Probe scalars for the `Z1`/`Z2` audits.
#[derive(Clone, Debug)]
pub struct ZAxiomOptions {
    pub rset: Vec<Rat>,
    pub cset: Vec<Rat>,
}

impl Default for ZAxiomOptions {
    fn default() -> Self {
        ZAxiomOptions {
            rset: vec![rat(1, 2), rint(2)],
            cset: vec![rint(1), rint(-1), rat(1, 2)],
        }
    }
}

impl ZAxiomOptions {
    /// Put `eps / width` for every truncation found in the expression at
    /// the front of the scaling probes: that is the scale at which
    /// truncations collapse the critical map, and putting it first makes it
    /// the reported witness.
    pub fn tuned_for(mut self, op: &OperatorHandle, grid: &FunctionGrid) -> Self {
        let width = grid.width();
        if width.is_positive() {
            let mut tuned = Vec::new();
            let mut stack = vec![op.expr()];
            while let Some(e) = stack.pop() {
                use crate::ops::Expr::*;
                match e {
                    Truncate { eps, inner } => {
                        tuned.push(eps / &width);
                        stack.push(inner);
                    }
                    Sum { terms } | Sup { terms } | Inf { terms } => stack.extend(terms.iter()),
                    Compose { inner, .. } | Scale { inner, .. } | Restrict { inner, .. }
                    | Indicator { inner } => stack.push(inner),
                    _ => {}
                }
            }
            tuned.extend(self.rset);
            self.rset = tuned;
        }
        let mut seen = Vec::new();
        self.rset.retain(|r| {
            if seen.contains(r) {
                false
            } else {
                seen.push(r.clone());
                true
            }
        });
        self
    }
}

/// Audit (Z1)–(Z5) over a full grid; each verdict is exact over the probed
/// universe and failures carry witnesses.
pub fn check_z_axioms(
    z: &CriticalMap,
    grid: &FunctionGrid,
    opts: &ZAxiomOptions,
) -> Result<Vec<ZAxiomReport>> {
    grid.space().check_same(z.space(), "critical-map grid")?;
    let nf = grid.len_checked()?;
    let n = z.space().len();
    if n > DEFAULT_SUBSET_CAP {
        return Err(Error::SubsetCapExceeded { size: n, cap: DEFAULT_SUBSET_CAP });
    }
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let mut reports = Vec::with_capacity(5);

    // Z1: translation
    let mut witness = None;
    let mut cases = 0;
    'z1: for i in 0..nf {
        let f = grid.field(i);
        let zf = z.eval(&f)?;
        for c in &opts.cset {
            cases += 1;
            let zs = z.eval(&f.shift(c))?;
            if zs != zf {
                witness = Some(ZWitness {
                    f: Some(f.clone()),
                    scalar: Some(c.clone()),
                    subset: None,
                    vertex: None,
                    note: format!("Z[f+c] = {zs:?} differs from Z[f] = {zf:?}"),
                });
                break 'z1;
            }
        }
    }
    reports.push(ZAxiomReport {
        axiom: ZAxiom::Z1Translation,
        holds: witness.is_none(),
        witness,
        cases,
    });

    // Z2: positive scaling, probed factor-major so tuned factors win the
    // witness slot
    let mut witness = None;
    let mut cases = 0;
    'z2: for r in opts.rset.iter().filter(|r| r.is_positive()) {
        for i in 0..nf {
            let f = grid.field(i);
            let zf = z.eval(&f)?;
            cases += 1;
            let zs = z.eval(&f.scale(r))?;
            if zs != zf {
                witness = Some(ZWitness {
                    f: Some(f.clone()),
                    scalar: Some(r.clone()),
                    subset: None,
                    vertex: None,
                    note: format!("Z[rf] = {zs:?} differs from Z[f] = {zf:?}"),
                });
                break 'z2;
            }
        }
    }
    reports.push(ZAxiomReport {
        axiom: ZAxiom::Z2Scaling,
        holds: witness.is_none(),
        witness,
        cases,
    });

    // Z3: the split identity at every grid value
    let mut witness = None;
    let mut cases = 0;
    'z3: for i in 0..nf {
        let f = grid.field(i);
        let zf = mask_of(&z.eval(&f)?);
        for r in grid.value_set() {
            cases += 1;
            let low = f.map(|v| if v <= r { v.clone() } else { r.clone() });
            let high = f.map(|v| if v >= r { v.clone() } else { r.clone() });
            let z_low = mask_of(&z.eval(&low)?);
            let z_high = mask_of(&z.eval(&high)?);
            let at_most =
                mask_of(&(0..n).filter(|&x| f.value(x) <= r).collect::<Vec<_>>());
            let combined = (z_low & at_most) | (z_high & !at_most & full);
            if combined != zf {
                witness = Some(ZWitness {
                    f: Some(f.clone()),
                    scalar: Some(r.clone()),
                    subset: None,
                    vertex: None,
                    note: format!(
                        "split at r gives {:?}, Z[f] = {:?}",
                        mask_members(combined, n),
                        mask_members(zf, n)
                    ),
                });
                break 'z3;
            }
        }
    }
    reports.push(ZAxiomReport { axiom: ZAxiom::Z3Split, holds: witness.is_none(), witness, cases });

    // Z4: complements of indicators are critical
    let mut witness = None;
    let mut cases = 0;
    for mask in 0..=full {
        cases += 1;
        let zk = z.eval_mask(mask)?;
        let complement = !mask & full;
        if complement & !zk != 0 {
            witness = Some(ZWitness {
                f: None,
                scalar: None,
                subset: Some(mask_members(mask, n)),
                vertex: Some((complement & !zk).trailing_zeros() as usize),
                note: "K^c is not contained in Z(1_K)".into(),
            });
            break;
        }
    }
    reports.push(ZAxiomReport {
        axiom: ZAxiom::Z4Complement,
        holds: witness.is_none(),
        witness,
        cases,
    });

    // Z5: the admitted family is the upward closure of its intersection
    let extracted = extract_system(z)?;
    let mut witness = None;
    let mut cases = 0;
    'z5: for x in 0..n {
        let bit = 1u32 << x;
        let dx = mask_of(&extracted.sets[x]);
        for mask in 0..=full {
            cases += 1;
            let admitted = mask & bit != 0 && z.eval_mask(mask)? & bit != 0;
            let upward = mask & dx == dx;
            if admitted != upward {
                witness = Some(ZWitness {
                    f: None,
                    scalar: None,
                    subset: Some(mask_members(mask, n)),
                    vertex: Some(x),
                    note: if admitted {
                        "admitted set does not contain D_x".into()
                    } else {
                        "superset of D_x is not admitted".into()
                    },
                });
                break 'z5;
            }
        }
    }
    reports.push(ZAxiomReport {
        axiom: ZAxiom::Z5Upward,
        holds: witness.is_none(),
        witness,
        cases,
    });

    Ok(reports)
}

/// Outcome of the classification procedure.
#[derive(Clone, Debug)]
pub enum ClassifyOutcome {
    /// The operator is equivalent to the steepest drop over the certified
    /// system: critical maps agree on the whole grid.
    Certified { system: NeighborhoodSystem },
    /// The operator is not 1-homogeneous on the grid.
    NotHomogeneous { witness: Box<crate::axioms::Witness> },
    /// Extraction produced a set that is not itself admitted.
    HypothesisFails { extracted: ExtractedSystem, vertices: Vec<usize> },
    /// The reconstruction disagrees with the operator's critical map.
    Mismatch { system: NeighborhoodSystem, field: ScalarField },
}

/// Classify a 1-homogeneous operator: extract the active system, test the
/// reconstruction hypothesis, rebuild the steepest-drop operator and compare
/// critical maps over the full grid.
pub fn classify(
    op: &OperatorHandle,
    grid: &FunctionGrid,
    opts: &crate::axioms::AuditOptions,
) -> Result<ClassifyOutcome> {
    let hom = crate::axioms::check_homogeneity(op, grid, (1, 1), opts)?;
    if let Some(w) = hom.witness {
        return Ok(ClassifyOutcome::NotHomogeneous { witness: Box::new(w) });
    }
    let cmap = CriticalMap::Operator(op);
    let extracted = extract_system(&cmap)?;
    if !extracted.hypothesis_holds() {
        let vertices =
            (0..extracted.hypothesis.len()).filter(|&x| !extracted.hypothesis[x]).collect();
        return Ok(ClassifyOutcome::HypothesisFails { extracted, vertices });
    }
    let system = extracted.system()?;
    let rebuilt = OperatorHandle::max_drop(system.clone());
    let nf = grid.len_checked()?;
    for i in 0..nf {
        let f = grid.field(i);
        let a = op.eval(&f)?.zero_set();
        let b = rebuilt.eval(&f)?.zero_set();
        if a != b {
            return Ok(ClassifyOutcome::Mismatch { system, field: f });
        }
    }
    Ok(ClassifyOutcome::Certified { system })
}
