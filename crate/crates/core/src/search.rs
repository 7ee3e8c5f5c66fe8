//! Derivative-free search for extremal configurations, an exhaustive lattice
//! oracle, and seeded random falsification.
//!
//! Every random stream is derived from `(seed, index)` with [`derive_seed`],
//! so results do not depend on how rayon schedules the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::BaryPoint;
use crate::objectives::{binomial, fig13_construction, min_area, small_count, triples, Configuration};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Version of the JSON documents produced here.
pub const SCHEMA_VERSION: u32 = 1;

/// Upper limit on `subsets * triples` for [`lattice_brute_force`].
pub const BRUTE_FORCE_BUDGET: f64 = 1e9;

const POLISH_START: f64 = 0.05;
const POLISH_MAX_EVALS: u64 = 200_000;
const MIN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    /// Maximize the smallest triple area.
    MaxMinArea,
    /// Minimize the number of triples with area `<= sigma`.
    MinSmallCount { sigma: f64 },
}

impl Objective {
    /// Reported value: the minimum area, or the small-triangle count.
    pub fn value(&self, points: &[BaryPoint]) -> f64 {
        match *self {
            Objective::MaxMinArea => min_area(points),
            Objective::MinSmallCount { sigma } => small_count(points, sigma).0 as f64,
        }
    }

    /// True if `a` is strictly better than `b`.
    pub fn better(&self, a: f64, b: f64) -> bool {
        match self {
            Objective::MaxMinArea => a > b,
            Objective::MinSmallCount { .. } => a < b,
        }
    }

    /// Quantity minimized by the annealer. For counts, ties are broken in
    /// favour of a larger total area of the small triangles.
    fn energy(&self, points: &[BaryPoint]) -> f64 {
        match *self {
            Objective::MaxMinArea => -min_area(points),
            Objective::MinSmallCount { sigma } => {
                let (count, sum) = small_count(points, sigma);
                let total = binomial(points.len() as u64, 3) as f64;
                sigma * (count as f64 - sum / (total * sigma * (1.0 + 1e-9)))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Objective::MaxMinArea => Ok(()),
            Objective::MinSmallCount { sigma } if sigma > 0.0 && sigma.is_finite() => Ok(()),
            Objective::MinSmallCount { sigma } => domain(format!("sigma must be positive, got {sigma}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub n: usize,
    pub objective: Objective,
    pub restarts: usize,
    pub seed: u64,
    /// Annealing sweeps per restart; each sweep proposes one move per point.
    pub max_iters: usize,
    /// Starting temperature, in area units.
    pub init_temp: f64,
    /// Temperature factor per sweep.
    pub cooling: f64,
    /// Move size (barycentric) at the starting temperature.
    pub step_scale: f64,
    /// Smallest pattern-search step.
    pub tolerance: f64,
    /// Starting configurations tried before the built-in ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_inits: Vec<Configuration>,
}

impl SearchParams {
    pub fn new(n: usize, objective: Objective) -> Self {
        Self {
            n,
            objective,
            restarts: 20,
            seed: DEFAULT_SEED,
            max_iters: 2000,
            init_temp: 0.05,
            cooling: 0.995,
            step_scale: 0.1,
            tolerance: 1e-9,
            extra_inits: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return domain(format!("n must be at least 3, got {}", self.n));
        }
        if self.restarts == 0 {
            return domain("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return domain("max_iters must be at least 1");
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return domain(format!("cooling must lie in (0, 1), got {}", self.cooling));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return domain(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if [self.init_temp, self.step_scale].iter().any(|v| v.is_nan() || *v <= 0.0) {
            return domain("init_temp and step_scale must be positive");
        }
        if let Some(c) = self.extra_inits.iter().find(|c| c.len() != self.n) {
            return domain(format!("initial configuration has {} points, expected {}", c.len(), self.n));
        }
        self.objective.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub seed: u64,
    /// How the restart was initialized.
    pub init: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub schema_version: u32,
    pub objective: Objective,
    pub params: SearchParams,
    pub best_config: Configuration,
    pub best_value: f64,
    pub best_restart: usize,
    pub per_restart: Vec<RestartRecord>,
    pub evaluations: u64,
}

/// SplitMix64 finalizer of `seed` and `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point of `T` (square-root method).
pub fn uniform_point<R: Rng>(rng: &mut R) -> BaryPoint {
    let s: f64 = rng.random::<f64>().sqrt();
    let r: f64 = rng.random();
    BaryPoint::project([1.0 - s, s * (1.0 - r), s * r])
}

fn vertices_and_midpoints() -> Vec<BaryPoint> {
    vec![
        BaryPoint::vertex(0),
        BaryPoint::vertex(1),
        BaryPoint::vertex(2),
        BaryPoint::project([0.5, 0.5, 0.0]),
        BaryPoint::project([0.0, 0.5, 0.5]),
        BaryPoint::project([0.5, 0.0, 0.5]),
    ]
}

fn initial(params: &SearchParams, index: usize, rng: &mut ChaCha8Rng) -> (String, Vec<BaryPoint>) {
    let n = params.n;
    let extra = params.extra_inits.len();
    if index < extra {
        return (format!("given[{index}]"), params.extra_inits[index].points().to_vec());
    }
    let mut structured: Vec<(&str, Vec<BaryPoint>)> = Vec::new();
    if n == 5 {
        structured.push(("fig13", fig13_construction().points().to_vec()));
    }
    structured.push(("vertices+midpoints", vertices_and_midpoints()));
    match structured.into_iter().nth(index - extra) {
        Some((name, mut pts)) => {
            pts.truncate(n);
            while pts.len() < n {
                pts.push(uniform_point(rng));
            }
            (name.to_string(), pts)
        }
        None => ("uniform".to_string(), (0..n).map(|_| uniform_point(rng)).collect()),
    }
}

struct RestartOutcome {
    record: RestartRecord,
    best: Vec<BaryPoint>,
    evaluations: u64,
}

fn perturb(p: &BaryPoint, step: f64, rng: &mut ChaCha8Rng) -> BaryPoint {
    let g: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let mean = (g[0] + g[1] + g[2]) / 3.0;
    let w = p.weights();
    BaryPoint::project(std::array::from_fn(|i| w[i] + step * (g[i] - mean)))
}

fn anneal(params: &SearchParams, index: usize) -> RestartOutcome {
    let seed = derive_seed(params.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (init, mut cur) = initial(params, index, &mut rng);
    let obj = params.objective;
    let mut evals = 1u64;
    let mut cur_e = obj.energy(&cur);
    let mut best = cur.clone();
    let mut best_e = cur_e;
    let mut temp = params.init_temp;
    for _ in 0..params.max_iters {
        let step = (params.step_scale * (temp / params.init_temp).sqrt()).max(MIN_STEP);
        for i in 0..params.n {
            let old = cur[i];
            cur[i] = perturb(&old, step, &mut rng);
            let e = obj.energy(&cur);
            evals += 1;
            let accept = e <= cur_e || rng.random::<f64>() < (-(e - cur_e) / temp).exp();
            if accept {
                cur_e = e;
                if e < best_e {
                    best_e = e;
                    best.clone_from(&cur);
                }
            } else {
                cur[i] = old;
            }
        }
        temp *= params.cooling;
    }
    let (polished, _, extra) = polish(obj, best, best_e, params.tolerance);
    evals += extra;
    RestartOutcome {
        record: RestartRecord {
            index,
            seed,
            init,
            value: obj.value(&polished),
        },
        best: polished,
        evaluations: evals,
    }
}

/// Compass search along the three edge directions of `T`, halving the step
/// until it drops below `tolerance`.
fn polish(obj: Objective, mut pts: Vec<BaryPoint>, mut e: f64, tolerance: f64) -> (Vec<BaryPoint>, f64, u64) {
    const DIRS: [[f64; 3]; 6] = [
        [1.0, -1.0, 0.0],
        [-1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0],
        [0.0, -1.0, 1.0],
        [-1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0],
    ];
    let mut h = POLISH_START;
    let mut evals = 0u64;
    while h >= tolerance && evals < POLISH_MAX_EVALS {
        let mut improved = false;
        for i in 0..pts.len() {
            for d in DIRS {
                let old = pts[i];
                let w = old.weights();
                pts[i] = BaryPoint::project(std::array::from_fn(|j| w[j] + h * d[j]));
                let cand = obj.energy(&pts);
                evals += 1;
                if cand < e {
                    e = cand;
                    improved = true;
                } else {
                    pts[i] = old;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    (pts, e, evals)
}

fn run(params: &SearchParams) -> Result<SearchResult> {
    params.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|i| anneal(params, i))
        .collect();
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if params.objective.better(o.record.value, outcomes[best].record.value) {
            best = i;
        }
    }
    let best_config = Configuration::new(outcomes[best].best.clone())?;
    Ok(SearchResult {
        schema_version: SCHEMA_VERSION,
        objective: params.objective,
        params: params.clone(),
        best_value: params.objective.value(best_config.points()),
        best_config,
        best_restart: best,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        per_restart: outcomes.into_iter().map(|o| o.record).collect(),
    })
}

/// Multi-start annealing plus compass polish for the max-min area.
pub fn maximize_min_area(params: &SearchParams) -> Result<SearchResult> {
    if params.objective != Objective::MaxMinArea {
        return domain("maximize_min_area needs the max-min-area objective");
    }
    run(params)
}

/// Multi-start annealing for the number of triples with area `<= sigma`.
pub fn minimize_small_count(params: &SearchParams, sigma: f64) -> Result<SearchResult> {
    let mut p = params.clone();
    p.objective = Objective::MinSmallCount { sigma };
    run(&p)
}

/// Points of the `k`-refinement lattice of `T`, in scaled coordinates.
pub fn lattice_points(k: u32) -> Vec<[i64; 3]> {
    let k = k as i64;
    (0..=k)
        .flat_map(|a| (0..=k - a).map(move |b| [a, b, k - a - b]))
        .collect()
}

fn int_det(p: &[i64; 3], q: &[i64; 3], r: &[i64; 3]) -> i64 {
    (p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0]) + p[2] * (q[0] * r[1] - q[1] * r[0])).abs()
}

/// Next `n`-combination of `0..m` in lexicographic order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let n = c.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if c[i] < m - n + i {
            c[i] += 1;
            for j in i + 1..n {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive optimum over all `n`-subsets of the `k`-lattice. Exact integer
/// arithmetic; on ties the lexicographically first subset wins.
pub fn lattice_brute_force(k: u32, n: usize, objective: Objective) -> Result<SearchResult> {
    if k == 0 || n < 3 {
        return domain("lattice brute force needs k >= 1 and n >= 3");
    }
    objective.validate()?;
    let pts = lattice_points(k);
    let m = pts.len();
    if n > m {
        return domain(format!("the {k}-lattice has only {m} points"));
    }
    let subsets = binomial(m as u64, n as u64) as f64;
    let estimate = subsets * binomial(n as u64, 3) as f64;
    if estimate.is_nan() || estimate > BRUTE_FORCE_BUDGET {
        return Err(Error::Budget {
            estimate,
            limit: BRUTE_FORCE_BUDGET,
        });
    }
    let scale = (k as f64).powi(3);
    let trip: Vec<[usize; 3]> = triples(n).collect();
    // Integer score, larger is better.
    let score = |c: &[usize]| -> i64 {
        match objective {
            Objective::MaxMinArea => trip
                .iter()
                .map(|t| int_det(&pts[c[t[0]]], &pts[c[t[1]]], &pts[c[t[2]]]))
                .min()
                .unwrap_or(0),
            Objective::MinSmallCount { sigma } => -(trip
                .iter()
                .filter(|t| int_det(&pts[c[t[0]]], &pts[c[t[1]]], &pts[c[t[2]]]) as f64 <= sigma * scale)
                .count() as i64),
        }
    };
    let per_first: Vec<Option<(i64, Vec<usize>, u64)>> = (0..=m - n)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<usize> = (first + 1..first + n).collect();
            let mut best: Option<(i64, Vec<usize>)> = None;
            let mut count = 0u64;
            let mut c = vec![0; n];
            loop {
                c[0] = first;
                c[1..].copy_from_slice(&rest);
                count += 1;
                let s = score(&c);
                if best.as_ref().is_none_or(|b| s > b.0) {
                    best = Some((s, c.clone()));
                }
                // advance the tail over (first+1)..m
                let mut tail: Vec<usize> = rest.iter().map(|x| x - first - 1).collect();
                if !next_combination(&mut tail, m - first - 1) {
                    break;
                }
                rest = tail.iter().map(|x| x + first + 1).collect();
            }
            best.map(|(s, c)| (s, c, count))
        })
        .collect();
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut evaluations = 0;
    for (s, c, count) in per_first.into_iter().flatten() {
        evaluations += count;
        if best.as_ref().is_none_or(|b| s > b.0) {
            best = Some((s, c));
        }
    }
    let (_, idx) = best.expect("at least one subset");
    let config = Configuration::from_weights(
        &idx.iter()
            .map(|&i| pts[i].map(|v| v as f64 / k as f64))
            .collect::<Vec<_>>(),
    )?;
    let value = objective.value(config.points());
    let mut params = SearchParams::new(n, objective);
    params.restarts = 1;
    params.seed = 0;
    Ok(SearchResult {
        schema_version: SCHEMA_VERSION,
        objective,
        params,
        best_config: config,
        best_value: value,
        best_restart: 0,
        per_restart: vec![RestartRecord {
            index: 0,
            seed: 0,
            init: format!("lattice k={k}"),
            value,
        }],
        evaluations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsificationReport {
    pub schema_version: u32,
    pub trials: u64,
    pub n: usize,
    pub sigma: f64,
    pub seed: u64,
    /// Configurations whose minimum triple area exceeds `sigma`.
    pub violations: u64,
    pub max_min_area: f64,
    /// Configuration attaining `max_min_area`.
    pub worst: Configuration,
    /// Fewest triples with area `<= sigma` over all trials.
    pub fewest_small: usize,
    pub fewest_small_config: Configuration,
}

const FALSIFY_CHUNK: u64 = 4096;

/// Sample `trials` uniform `n`-point configurations and count those with
/// no triple of area `<= sigma`.
pub fn random_falsification(trials: u64, n: usize, sigma: f64, seed: u64) -> Result<FalsificationReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    if n < 3 {
        return domain(format!("n must be at least 3, got {n}"));
    }
    struct Acc {
        violations: u64,
        max_min: (f64, Vec<BaryPoint>),
        fewest: (usize, Vec<BaryPoint>),
    }
    let chunks = trials.div_ceil(FALSIFY_CHUNK);
    let parts: Vec<Acc> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
            let len = FALSIFY_CHUNK.min(trials - c * FALSIFY_CHUNK);
            let mut acc = Acc {
                violations: 0,
                max_min: (f64::NEG_INFINITY, Vec::new()),
                fewest: (usize::MAX, Vec::new()),
            };
            for _ in 0..len {
                let pts: Vec<BaryPoint> = (0..n).map(|_| uniform_point(&mut rng)).collect();
                let m = min_area(&pts);
                if m > sigma {
                    acc.violations += 1;
                }
                let (count, _) = small_count(&pts, sigma);
                if count < acc.fewest.0 {
                    acc.fewest = (count, pts.clone());
                }
                if m > acc.max_min.0 {
                    acc.max_min = (m, pts);
                }
            }
            acc
        })
        .collect();
    let mut total = Acc {
        violations: 0,
        max_min: (f64::NEG_INFINITY, Vec::new()),
        fewest: (usize::MAX, Vec::new()),
    };
    for p in parts {
        total.violations += p.violations;
        if p.max_min.0 > total.max_min.0 {
            total.max_min = p.max_min;
        }
        if p.fewest.0 < total.fewest.0 {
            total.fewest = p.fewest;
        }
    }
    Ok(FalsificationReport {
        schema_version: SCHEMA_VERSION,
        trials,
        n,
        sigma,
        seed,
        violations: total.violations,
        max_min_area: total.max_min.0,
        worst: Configuration::new(total.max_min.1)?,
        fewest_small: total.fewest.0,
        fewest_small_config: Configuration::new(total.fewest.1)?,
    })
}
