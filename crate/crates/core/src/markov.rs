//! Oriented generators, exact limit laws and trajectory simulation.
//!
//! Everything except trajectory sampling is exact: closed classes come from
//! the downhill digraph, absorption probabilities and within-class
//! stationary laws from rational elimination. Simulation is the one
//! floating-point path and is cross-checked against the exact law.

use crate::critical::{condense, DescentOrder};
use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, Rat};
use crate::field::ScalarField;
use crate::generator::Generator;
use crate::linalg;
use crate::space::FiniteSpace;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// The downhill restriction of a generator: uphill rates are dropped and
/// diagonals recomputed so rows still vanish.
#[derive(Clone, Debug)]
pub struct OrientedGenerator {
    matrix: Generator,
    base: Generator,
    profile: ScalarField,
}

impl OrientedGenerator {
    pub fn matrix(&self) -> &Generator {
        &self.matrix
    }

    pub fn base(&self) -> &Generator {
        &self.base
    }

    pub fn profile(&self) -> &ScalarField {
        &self.profile
    }
}

/// Build `L^f`: keep `L(x,y)` iff `f(y) ≤ f(x)`.
pub fn oriented_generator(gen: &Generator, f: &ScalarField) -> Result<OrientedGenerator> {
    gen.space().check_same(f.space(), "oriented generator")?;
    let n = gen.len();
    let mut rates = vec![vec![Rat::zero(); n]; n];
    for x in 0..n {
        for y in 0..n {
            if x != y && gen.entry(x, y).is_positive() && f.value(y) <= f.value(x) {
                rates[x][y] = gen.entry(x, y).clone();
            }
        }
    }
    let matrix = Generator::from_rates(gen.space().clone(), rates)?;
    Ok(OrientedGenerator { matrix, base: gen.clone(), profile: f.clone() })
}

/// An exact probability vector on the space.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    space: FiniteSpace,
    weights: Vec<Rat>,
}

impl Distribution {
    pub fn new(space: FiniteSpace, weights: Vec<Rat>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::Other("one weight per vertex".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Other("negative probability".into()));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Other(format!(
                "distribution sums to {}",
                crate::exact::rat_to_string(&total)
            )));
        }
        Ok(Distribution { space, weights })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn weight(&self, x: usize) -> &Rat {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&x| self.weights[x].is_positive()).collect()
    }

    /// Exact expectation of a scalar field.
    pub fn expect(&self, f: &ScalarField) -> Result<Rat> {
        self.space.check_same(f.space(), "expectation")?;
        Ok(self.weights.iter().zip(f.values()).map(|(w, v)| w * v).sum())
    }

    /// Total-variation distance to another distribution, as `f64`.
    pub fn total_variation_f64(&self, other: &[f64]) -> f64 {
        0.5 * self
            .weights
            .iter()
            .zip(other)
            .map(|(w, o)| (rat_to_f64(w) - o).abs())
            .sum::<f64>()
    }
}

/// Precomputed limit-law solver for one oriented generator: closed classes,
/// their stationary laws, and absorption probabilities from every state.
pub struct LimitLawSolver {
    order: DescentOrder,
    /// Sink-component ids in `order.components` indexing.
    classes: Vec<usize>,
    /// Stationary law per closed class (over the class members).
    stationary: Vec<Vec<Rat>>,
    /// Absorption probability into each class from each state.
    absorb: Vec<Vec<Rat>>, // absorb[state][class]
    space: FiniteSpace,
}

impl LimitLawSolver {
    pub fn new(oriented: &OrientedGenerator) -> Result<Self> {
        let lf = oriented.matrix();
        let n = lf.len();
        let edges: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).filter(|&y| y != x && lf.entry(x, y).is_positive()).collect())
            .collect();
        let order = condense(edges);
        let classes: Vec<usize> = order.sink_components.clone();

        // stationary law inside each closed class (irreducible restriction)
        let mut stationary = Vec::with_capacity(classes.len());
        for &c in &classes {
            let members = &order.components[c];
            let sub: Vec<Vec<Rat>> = members
                .iter()
                .map(|&x| members.iter().map(|&y| lf.entry(x, y).clone()).collect())
                .collect();
            stationary.push(linalg::stationary(&sub)?);
        }

        // absorption probabilities from transient states, one elimination
        let in_class: Vec<Option<usize>> = (0..n)
            .map(|x| classes.iter().position(|&c| order.component[x] == c))
            .collect();
        let transient: Vec<usize> = (0..n).filter(|&x| in_class[x].is_none()).collect();
        let mut absorb = vec![vec![Rat::zero(); classes.len()]; n];
        for (x, slot) in in_class.iter().enumerate() {
            if let Some(k) = slot {
                absorb[x][*k] = Rat::one();
            }
        }
        if !transient.is_empty() {
            let a: Vec<Vec<Rat>> = transient
                .iter()
                .map(|&x| transient.iter().map(|&y| lf.entry(x, y).clone()).collect())
                .collect();
            // rhs_k(x) = -Σ_{y in class k} L^f(x, y)
            let bs: Vec<Vec<Rat>> = (0..classes.len())
                .map(|k| {
                    transient
                        .iter()
                        .map(|&x| {
                            -(0..n)
                                .filter(|&y| in_class[y] == Some(k))
                                .map(|y| lf.entry(x, y).clone())
                                .sum::<Rat>()
                        })
                        .collect()
                })
                .collect();
            let sols = linalg::solve_multi(&a, &bs)?;
            for (k, sol) in sols.iter().enumerate() {
                for (ti, &x) in transient.iter().enumerate() {
                    absorb[x][k] = sol[ti].clone();
                }
            }
        }
        // absorption probabilities must sum to one at every state
        for (x, row) in absorb.iter().enumerate() {
            let total: Rat = row.iter().sum();
            if !total.is_one() {
                return Err(Error::Other(format!(
                    "absorption probabilities from state {x} sum to {}",
                    crate::exact::rat_to_string(&total)
                )));
            }
        }
        Ok(LimitLawSolver {
            order,
            classes,
            stationary,
            absorb,
            space: lf.space().clone(),
        })
    }

    pub fn order(&self) -> &DescentOrder {
        &self.order
    }

    /// The exact limit law started from `x`.
    pub fn law(&self, x: usize) -> Distribution {
        let n = self.space.len();
        let mut weights = vec![Rat::zero(); n];
        for (k, &c) in self.classes.iter().enumerate() {
            let a = &self.absorb[x][k];
            if a.is_zero() {
                continue;
            }
            for (slot, &y) in self.order.components[c].iter().enumerate() {
                weights[y] += a * &self.stationary[k][slot];
            }
        }
        Distribution::new(self.space.clone(), weights).expect("laws are exact by construction")
    }

    /// Union of the supports of the laws from every start.
    pub fn support_union(&self) -> Vec<usize> {
        let mut mask = vec![false; self.space.len()];
        for x in 0..self.space.len() {
            for y in self.law(x).support() {
                mask[y] = true;
            }
        }
        (0..self.space.len()).filter(|&y| mask[y]).collect()
    }
}

/// `π^f` from a single start: exact absorption into closed classes plus
/// within-class stationary laws.
pub fn limit_distribution(gen: &Generator, f: &ScalarField, x: usize) -> Result<Distribution> {
    let oriented = oriented_generator(gen, f)?;
    Ok(LimitLawSolver::new(&oriented)?.law(x))
}

/// A simulated downhill trajectory.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// `(jump time, vertex)`, starting at `(0, x)`; times strictly increase.
    pub steps: Vec<(f64, usize)>,
    pub seed: u64,
    pub horizon: f64,
}

impl Trajectory {
    /// State occupied at the horizon.
    pub fn final_state(&self) -> usize {
        self.steps.last().expect("trajectories start at t = 0").1
    }
}

/// Jump-chain simulation of the process generated by `L^f`: exponential
/// holding times by inverse CDF from a seeded ChaCha12 stream; absorbing
/// states hold forever.
pub fn simulate_trajectory(
    gen: &Generator,
    f: &ScalarField,
    start: usize,
    horizon: f64,
    seed: u64,
) -> Result<Trajectory> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::Other("horizon must be positive".into()));
    }
    let oriented = oriented_generator(gen, f)?;
    simulate_oriented(&oriented, start, horizon, seed)
}

pub fn simulate_oriented(
    oriented: &OrientedGenerator,
    start: usize,
    horizon: f64,
    seed: u64,
) -> Result<Trajectory> {
    let lf = oriented.matrix();
    let n = lf.len();
    if start >= n {
        return Err(Error::Other(format!("start vertex {start} out of range")));
    }
    let rates: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| if x == y { 0.0 } else { rat_to_f64(lf.entry(x, y)) }).collect())
        .collect();
    let total: Vec<f64> = rates.iter().map(|r| r.iter().sum()).collect();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut steps = vec![(0.0, start)];
    let mut t = 0.0;
    let mut v = start;
    loop {
        if total[v] <= 0.0 {
            break; // absorbing
        }
        // inverse-CDF exponential with rate total[v]
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        t -= u.ln() / total[v];
        if t > horizon {
            break;
        }
        let mut pick = rng.gen_range(0.0..total[v]);
        let mut next = v;
        for (y, r) in rates[v].iter().enumerate() {
            if *r <= 0.0 {
                continue;
            }
            if pick < *r {
                next = y;
                break;
            }
            pick -= r;
        }
        v = next;
        steps.push((t, v));
    }
    Ok(Trajectory { steps, seed, horizon })
}

/// Verdict of the generator-action comparison: with `T_L[f] ≥ T_L[g]`
/// pointwise, the oriented action must satisfy `L^f[g] ≥ L^f[f]` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionComparison {
    HypothesisFails { vertex: usize },
    Holds,
    Violation { vertex: usize },
}

pub fn check_action_comparison(
    gen: &Generator,
    f: &ScalarField,
    g: &ScalarField,
) -> Result<ActionComparison> {
    f.space().check_same(g.space(), "action comparison")?;
    let tf = crate::ops::rate_descent(gen, f)?;
    let tg = crate::ops::rate_descent(gen, g)?;
    for x in 0..f.len() {
        if tf.value(x).try_cmp(tg.value(x))? == std::cmp::Ordering::Less {
            return Ok(ActionComparison::HypothesisFails { vertex: x });
        }
    }
    let lf = oriented_generator(gen, f)?;
    let act_g = lf.matrix().apply(g)?;
    let act_f = lf.matrix().apply(f)?;
    for x in 0..f.len() {
        if act_g[x] < act_f[x] {
            return Ok(ActionComparison::Violation { vertex: x });
        }
    }
    Ok(ActionComparison::Holds)
}
