//! Critical sets, the descent preorder and brute-force oracles for the
//! comparison and determination theorems.

use crate::error::Result;
use crate::exact::Rat;
use crate::exec::Executor;
use crate::fgrid::FunctionGrid;
use crate::field::{ExtendedField, ScalarField};
use crate::generator::Generator;
use crate::ops::DescentOperator;
use num_traits::Signed;
use std::cmp::Ordering;

/// `Z_T(f)`: the exact zero set of `T[f]`. Entries at `+inf` are simply
/// nonzero, never an error.
pub fn critical_set(op: &dyn DescentOperator, f: &ScalarField) -> Result<Vec<usize>> {
    Ok(op.eval(f)?.zero_set())
}

/// The descent reachability relation: an edge `x -> y` is recorded iff
/// `L(x,y) > 0` and `f(y) ≤ f(x)`; the preorder is its reflexive-transitive
/// closure, and the paired condensation is acyclic.
#[derive(Clone, Debug)]
pub struct DescentOrder {
    /// Downhill adjacency per vertex.
    pub edges: Vec<Vec<usize>>,
    /// Strongly-connected-component id per vertex.
    pub component: Vec<usize>,
    /// Component member lists.
    pub components: Vec<Vec<usize>>,
    /// Components with no outgoing condensation edge.
    pub sink_components: Vec<usize>,
}

impl DescentOrder {
    /// Reachability including the empty path.
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let n = self.edges.len();
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.edges[v] {
                if w == to {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Vertices lying in sink components: the minima of the preorder.
    pub fn order_minima(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .sink_components
            .iter()
            .flat_map(|&c| self.components[c].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Build the descent order of `f` under the generator `L`.
pub fn descent_order(gen: &Generator, f: &ScalarField) -> Result<DescentOrder> {
    gen.space().check_same(f.space(), "descent order")?;
    let n = gen.len();
    let mut edges = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if x != y && gen.entry(x, y).is_positive() && f.value(y) <= f.value(x) {
                edges[x].push(y);
            }
        }
    }
    Ok(condense(edges))
}

/// Tarjan condensation of a downhill adjacency list.
pub fn condense(edges: Vec<Vec<usize>>) -> DescentOrder {
    let n = edges.len();
    let mut state = Tarjan {
        edges: &edges,
        index: 0,
        idx: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        component: vec![usize::MAX; n],
        components: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v] == usize::MAX {
            state.connect(v);
        }
    }
    let Tarjan { component, components, .. } = state;
    let mut is_sink = vec![true; components.len()];
    for (x, outs) in edges.iter().enumerate() {
        for &y in outs {
            if component[x] != component[y] {
                is_sink[component[x]] = false;
            }
        }
    }
    let sink_components = (0..components.len()).filter(|&c| is_sink[c]).collect();
    DescentOrder { edges, component, components, sink_components }
}

struct Tarjan<'a> {
    edges: &'a [Vec<usize>],
    index: usize,
    idx: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn connect(&mut self, v: usize) {
        self.idx[v] = self.index;
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.edges[v] {
            if self.idx[w] == usize::MAX {
                self.connect(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.idx[w]);
            }
        }
        if self.low[v] == self.idx[v] {
            let cid = self.components.len();
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("stack nonempty at SCC root");
                self.on_stack[w] = false;
                self.component[w] = cid;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.components.push(comp);
        }
    }
}

/// `M(f)`: states from which every reachable state is mutually reachable.
pub fn minima_set(gen: &Generator, f: &ScalarField) -> Result<Vec<usize>> {
    Ok(descent_order(gen, f)?.order_minima())
}

/// Outcome of a single comparison-principle instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonVerdict {
    /// Hypotheses not satisfied; nothing to conclude.
    HypothesesFail,
    /// Hypotheses and conclusion both hold.
    ConclusionHolds,
    /// Hypotheses hold yet `f ≥ g + c` fails somewhere: impossible for a
    /// descent modulus.
    TheoremViolation { vertex: usize },
}

/// Check one instance of the comparison principle: if `T[f] ≥ T[g]`
/// pointwise and `f ≥ g + c` on `Z_T(f)`, then `f ≥ g + c` everywhere.
pub fn check_comparison(
    op: &dyn DescentOperator,
    f: &ScalarField,
    g: &ScalarField,
    c: &Rat,
) -> Result<ComparisonVerdict> {
    f.space().check_same(g.space(), "comparison pair")?;
    let tf = op.eval(f)?;
    let tg = op.eval(g)?;
    for x in 0..f.len() {
        if tf.value(x).try_cmp(tg.value(x))? == Ordering::Less {
            return Ok(ComparisonVerdict::HypothesesFail);
        }
    }
    for x in tf.zero_set() {
        if f.value(x) < &(g.value(x) + c) {
            return Ok(ComparisonVerdict::HypothesesFail);
        }
    }
    for x in 0..f.len() {
        if f.value(x) < &(g.value(x) + c) {
            return Ok(ComparisonVerdict::TheoremViolation { vertex: x });
        }
    }
    Ok(ComparisonVerdict::ConclusionHolds)
}

/// A pair the determination theorem forbids: equal images, equal on the
/// critical set, yet different functions.
#[derive(Clone, Debug)]
pub struct DeterminationViolation {
    pub f_index: u64,
    pub g_index: u64,
    pub f: ScalarField,
    pub g: ScalarField,
}

#[derive(Clone, Debug)]
pub struct DeterminationReport {
    pub violations: Vec<DeterminationViolation>,
    pub pairs_checked: u64,
    /// Fields excluded because `T[f]` has `+inf` entries (outside `dom T`).
    pub dom_excluded: u64,
}

/// Exhaustive determination oracle over a grid.
///
/// Enumerates unordered pairs `(f, g)` of grid fields inside `dom(T)`,
/// and flags every pair with `T[f] = T[g]` pointwise, `f = g` on
/// `Z_T(f)`, yet `f ≠ g`. Expected empty for descent moduli; nonempty
/// reproduces the counterexample operators.
pub fn check_determination(
    op: &dyn DescentOperator,
    grid: &FunctionGrid,
    exec: &Executor,
) -> Result<DeterminationReport> {
    grid.space().check_same(op.space(), "determination grid")?;
    let nf = grid.len_checked()?;
    let images: Vec<ExtendedField> = exec
        .map_collect(nf, |i| op.eval(&grid.field(i)))
        .into_iter()
        .collect::<Result<_>>()?;
    let in_dom: Vec<bool> = images.iter().map(|t| !t.has_infinite()).collect();
    let dom_excluded = in_dom.iter().filter(|&&b| !b).count() as u64;

    // group fields by a hash of the image so only plausible pairs are
    // compared exactly
    use std::collections::HashMap;
    let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
    for i in 0..nf {
        if !in_dom[i as usize] {
            continue;
        }
        buckets.entry(image_key(&images[i as usize])).or_default().push(i);
    }

    // unordered pairs including the diagonal: n(n+1)/2
    let pairs_checked = nf * (nf + 1) / 2;
    let mut suspects: Vec<(u64, u64)> = Vec::new();
    for ids in buckets.values() {
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                suspects.push((i, j));
            }
        }
    }
    suspects.sort_unstable();

    let mut violations = Vec::new();
    for (i, j) in suspects {
        let eq = images[i as usize].eq_pointwise(&images[j as usize])?;
        if !eq {
            continue;
        }
        let f = grid.field(i);
        let g = grid.field(j);
        let z = images[i as usize].zero_set();
        let agrees_on_z = z.iter().all(|&x| f.value(x) == g.value(x));
        if agrees_on_z && f != g {
            violations.push(DeterminationViolation { f_index: i, g_index: j, f, g });
        }
    }
    Ok(DeterminationReport { violations, pairs_checked, dom_excluded })
}

/// Deterministic structural key of an extended field (collisions are
/// resolved by the exact comparison that follows).
fn image_key(t: &ExtendedField) -> u64 {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut h = DefaultHasher::new();
    for v in t.values() {
        match v {
            crate::exact::Xval::Finite(e) => {
                0u8.hash(&mut h);
                e.hash(&mut h);
            }
            crate::exact::Xval::Approx { lo, hi } => {
                1u8.hash(&mut h);
                lo.hash(&mut h);
                hi.hash(&mut h);
            }
            crate::exact::Xval::Infinite => 2u8.hash(&mut h),
        }
    }
    h.finish()
}

/// The enhanced probabilistic oracle: the agreement set shrinks from
/// `Z_T(f)` to `M(f) ∪ M(g)` when `T = T_L`.
pub fn check_probabilistic_determination(
    gen: &Generator,
    grid: &FunctionGrid,
    exec: &Executor,
) -> Result<DeterminationReport> {
    grid.space().check_same(gen.space(), "determination grid")?;
    let nf = grid.len_checked()?;
    let op = crate::ops::OperatorHandle::rate_descent(gen.clone());
    let images: Vec<ExtendedField> = exec
        .map_collect(nf, |i| op.eval(&grid.field(i)))
        .into_iter()
        .collect::<Result<_>>()?;
    let minima: Vec<Vec<usize>> = exec
        .map_collect(nf, |i| minima_set(gen, &grid.field(i)))
        .into_iter()
        .collect::<Result<_>>()?;

    use std::collections::HashMap;
    let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
    for i in 0..nf {
        buckets.entry(image_key(&images[i as usize])).or_default().push(i);
    }
    let mut suspects: Vec<(u64, u64)> = Vec::new();
    for ids in buckets.values() {
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                suspects.push((i, j));
            }
        }
    }
    suspects.sort_unstable();

    let mut violations = Vec::new();
    for (i, j) in suspects {
        if !images[i as usize].eq_pointwise(&images[j as usize])? {
            continue;
        }
        let f = grid.field(i);
        let g = grid.field(j);
        let agreement: Vec<usize> = {
            let mut m = minima[i as usize].clone();
            m.extend_from_slice(&minima[j as usize]);
            m.sort_unstable();
            m.dedup();
            m
        };
        let agrees = agreement.iter().all(|&x| f.value(x) == g.value(x));
        if agrees && f != g {
            violations.push(DeterminationViolation { f_index: i, g_index: j, f, g });
        }
    }
    Ok(DeterminationReport { violations, pairs_checked: nf * (nf + 1) / 2, dom_excluded: 0 })
}
