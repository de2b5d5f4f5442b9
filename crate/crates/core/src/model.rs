//! Core value types shared by every solver, plus configuration ingestion.
//!
//! Complex numbers travel as [`C64`]; on the wire they are `[re, im]` pairs.

use std::f64::consts::PI;
use std::fmt;
use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Family, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Pairwise distance below which two positions (or two coefficients) are
/// treated as coincident.
pub const COLLISION_TOL: f64 = 1e-10;

/// Default number of sampling intervals when a config does not specify one.
pub const DEFAULT_SAMPLES: usize = 1000;

pub(crate) fn ensure_finite(values: &[C64], context: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

/// Fails with a collision error naming the first pair closer than [`COLLISION_TOL`].
pub(crate) fn ensure_distinct(values: &[C64], family: Family) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let distance = (values[i] - values[j]).norm();
            if distance <= COLLISION_TOL {
                return Err(Error::Collision { family, i, j, distance });
            }
        }
    }
    Ok(())
}

/// Smallest pairwise distance, or `+inf` for fewer than two points.
pub fn min_pairwise_distance(values: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.min((values[i] - values[j]).norm());
        }
    }
    best
}

/// Period `2π/ω` of the isochronous motion.
pub fn period_for(omega: f64) -> f64 {
    2.0 * PI / omega
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: i64,
    omega: f64,
    z0: Vec<[f64; 2]>,
    v0: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<i64>,
}

/// Problem size, frequency and initial data of one many-body run.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    omega: f64,
    z0: Vec<C64>,
    v0: Vec<C64>,
    t_end: Option<f64>,
    samples: Option<usize>,
}

impl SystemConfig {
    pub fn new(omega: f64, z0: Vec<C64>, v0: Vec<C64>) -> Result<Self> {
        let n = z0.len();
        Self::validated(n as i64, omega, z0, v0, None, None)
    }

    fn validated(
        n: i64,
        omega: f64,
        z0: Vec<C64>,
        v0: Vec<C64>,
        t_end: Option<f64>,
        samples: Option<i64>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation("n", "n must be ≥ 2"));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::validation("omega", "omega must be a finite number > 0"));
        }
        let n = n as usize;
        if z0.len() != n {
            return Err(Error::validation(
                "z0",
                format!("expected {n} positions, got {}", z0.len()),
            ));
        }
        if v0.len() != n {
            return Err(Error::validation(
                "v0",
                format!("expected {n} velocities, got {}", v0.len()),
            ));
        }
        for (name, values) in [("z0", &z0), ("v0", &v0)] {
            if let Some(k) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::validation(format!("{name}[{k}]"), "non-finite entry"));
            }
        }
        if let Err(Error::Collision { i, j, .. }) = ensure_distinct(&z0, Family::Positions) {
            return Err(Error::validation(
                format!("z0[{j}]"),
                format!("coincident initial positions (z0[{i}] and z0[{j}])"),
            ));
        }
        if let Some(t) = t_end {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::validation("t_end", "t_end must be a finite number > 0"));
            }
        }
        let samples = match samples {
            Some(s) if s < 1 => return Err(Error::validation("samples", "samples must be ≥ 1")),
            Some(s) => Some(s as usize),
            None => None,
        };
        Ok(SystemConfig {
            omega,
            z0,
            v0,
            t_end,
            samples,
        })
    }

    pub fn with_t_end(mut self, t_end: f64) -> Result<Self> {
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(Error::validation("t_end", "t_end must be a finite number > 0"));
        }
        self.t_end = Some(t_end);
        Ok(self)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        if samples < 1 {
            return Err(Error::validation("samples", "samples must be ≥ 1"));
        }
        self.samples = Some(samples);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.z0.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn z0(&self) -> &[C64] {
        &self.z0
    }

    pub fn v0(&self) -> &[C64] {
        &self.v0
    }

    /// End of the simulated window; defaults to one period.
    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or_else(|| self.period())
    }

    /// Number of sampling intervals (the grid has `samples + 1` points).
    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn period(&self) -> f64 {
        period_for(self.omega)
    }

    /// Uniform grid `0, t_end/samples, …, t_end`.
    pub fn time_grid(&self) -> Vec<f64> {
        uniform_grid(self.t_end(), self.samples())
    }

    /// Canonical JSON form; [`load_config`] on it reproduces `self`.
    pub fn to_json(&self) -> String {
        let pair = |z: &C64| [z.re, z.im];
        let raw = RawConfig {
            n: self.n() as i64,
            omega: self.omega,
            z0: self.z0.iter().map(pair).collect(),
            v0: self.v0.iter().map(pair).collect(),
            t_end: self.t_end,
            samples: self.samples.map(|s| s as i64),
        };
        serde_json::to_string(&raw).expect("config serialization cannot fail")
    }
}

/// `samples + 1` equally spaced times on `[0, t_end]`, with the endpoint exact.
pub fn uniform_grid(t_end: f64, samples: usize) -> Vec<f64> {
    let samples = samples.max(1);
    (0..=samples)
        .map(|k| {
            if k == samples {
                t_end
            } else {
                t_end * k as f64 / samples as f64
            }
        })
        .collect()
}

/// Parses and validates a JSON configuration document.
pub fn load_config<R: Read>(mut source: R) -> Result<SystemConfig> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let to_c = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| C64::new(re, im)).collect();
    SystemConfig::validated(raw.n, raw.omega, to_c(raw.z0), to_c(raw.v0), raw.t_end, raw.samples)
}

/// Period `T = 2π/ω` of a configuration.
pub fn period(config: &SystemConfig) -> f64 {
    config.period()
}

/// Polynomial coefficients together with their time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffState {
    c: Vec<C64>,
    cdot: Vec<C64>,
}

impl CoeffState {
    pub fn new(c: Vec<C64>, cdot: Vec<C64>) -> Result<Self> {
        if c.len() != cdot.len() {
            return Err(Error::LengthMismatch {
                expected: c.len(),
                got: cdot.len(),
            });
        }
        ensure_finite(&c, "coefficients")?;
        ensure_finite(&cdot, "coefficient velocities")?;
        Ok(CoeffState { c, cdot })
    }

    pub fn c(&self) -> &[C64] {
        &self.c
    }

    pub fn cdot(&self) -> &[C64] {
        &self.cdot
    }
}

/// `z^N + c_1 z^(N-1) + … + c_N`, stored as `[c_1, …, c_N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<C64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        MonicPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `max(1, max_m |c_m|)`, the reference magnitude for residual checks.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max)
    }
}

/// A permutation of `0..n`; `map[k]` is the image of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Returns `None` unless `map` is a bijection of `0..map.len()`.
    pub fn from_vec(map: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; map.len()];
        for &k in &map {
            if k >= map.len() || seen[k] {
                return None;
            }
            seen[k] = true;
        }
        Some(Permutation(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&k| self.0[k]).collect())
    }

    /// Smallest `k ≥ 1` with `self^k = id` (lcm of the cycle lengths).
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let mut seen = vec![false; self.0.len()];
        let mut order = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k];
                len += 1;
            }
            order = order / gcd(order, len) * len;
        }
        order
    }

    /// Reorders `values` so that entry `k` of the result is `values[self(k)]`.
    pub fn gather<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.0.iter().map(|&k| values[k].clone()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

/// Labeled samples of `N` complex quantities on an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub samples: Vec<Vec<C64>>,
    /// Time derivatives at the same times, when the producer knows them.
    pub velocities: Option<Vec<Vec<C64>>>,
    /// Label permutation relating the sample at `t = T` to the first sample:
    /// `samples[T][k] ≈ samples[0][σ(k)]`.
    pub closure_permutation: Option<Permutation>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, samples: Vec<Vec<C64>>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                got: samples.len(),
            });
        }
        check_increasing(&times)?;
        if let Some(first) = samples.first() {
            let n = first.len();
            if let Some(bad) = samples.iter().find(|s| s.len() != n) {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: bad.len(),
                });
            }
        }
        Ok(Trajectory {
            times,
            samples,
            velocities: None,
            closure_permutation: None,
        })
    }

    pub fn n(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> &[C64] {
        &self.samples[0]
    }

    pub fn last(&self) -> &[C64] {
        &self.samples[self.samples.len() - 1]
    }

    /// Index of the sample whose time is within `tol` of `t`.
    pub fn index_of_time(&self, t: f64, tol: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    /// Largest label-wise distance to another trajectory on the same grid.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_increasing(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("time grid"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::TimeGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// The two Hermite-derived equilibrium families of the coefficient system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumFamily {
    /// Coefficients are the real Hermite zeros.
    Real,
    /// Coefficients are `i` times the Hermite zeros.
    Imaginary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub configuration: Vec<C64>,
    pub family: EquilibriumFamily,
    /// Lexicographic index of the coefficient ordering that produced the entry.
    pub permutation_index: usize,
    /// `‖rhs(ẑ, 0)‖_∞` of the equations of motion at this configuration.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EquilibriumCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl EquilibriumCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_minimal_config() {
        let cfg = parse_config(r#"{"n":2,"omega":1.0,"z0":[[1,0],[2,0]],"v0":[[0,0],[0,0]]}"#).unwrap();
        assert_eq!(cfg.n(), 2);
        assert_eq!(cfg.omega(), 1.0);
        assert_eq!(cfg.z0(), &[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        assert_eq!(cfg.v0(), &[C64::new(0.0, 0.0); 2]);
        assert_eq!(cfg.samples(), DEFAULT_SAMPLES);
        assert!((cfg.t_end() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_single_body() {
        let err = parse_config(r#"{"n":1,"omega":1.0,"z0":[[1,0]],"v0":[[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("n must be ≥ 2"), "{err}");
    }

    #[test]
    fn rejects_coincident_positions() {
        let err = parse_config(r#"{"n":2,"omega":1.0,"z0":[[1,0],[1,0]],"v0":[[0,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("coincident initial positions"), "{err}");
        assert!(err.to_string().contains("z0[1]"));
    }

    #[test]
    fn rejects_bad_omega_and_lengths() {
        let err = parse_config(r#"{"n":2,"omega":0.0,"z0":[[1,0],[2,0]],"v0":[[0,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("omega"));
        let err = parse_config(r#"{"n":2,"omega":1.0,"z0":[[1,0],[2,0]],"v0":[[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("v0"));
        let err = parse_config(r#"{"n":2,"omega":1.0,"z0":[[1,0],[2,0]],"v0":[[0,0],[0,0]],"samples":0}"#).unwrap_err();
        assert!(err.to_string().contains("samples"));
    }

    #[test]
    fn malformed_document_is_a_parse_error() {
        assert!(matches!(parse_config("{\"n\":2,"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_config(r#"{"n":2,"omega":1.0,"z0":[[1,0,3],[2,0]],"v0":[[0,0],[0,0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_config(r#"{"n":2,"omega":1e999,"z0":[[1,0],[2,0]],"v0":[[0,0],[0,0]]}"#),
            Err(Error::Parse(_)) | Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn period_values() {
        let cfg = |omega| {
            SystemConfig::new(
                omega,
                vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                vec![C64::default(); 2],
            )
            .unwrap()
        };
        assert!((period(&cfg(1.0)) - 2.0 * PI).abs() < 1e-15);
        assert!((period(&cfg(2.0 * PI)) - 1.0).abs() < 1e-15);
        assert!((period(&cfg(0.5)) - 4.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn permutation_order() {
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(Permutation::from_vec(vec![1, 0, 2]).unwrap().order(), 2);
        assert_eq!(Permutation::from_vec(vec![1, 2, 0, 4, 3]).unwrap().order(), 6);
        assert!(Permutation::from_vec(vec![0, 0]).is_none());
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = uniform_grid(2.0 * PI, 7);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[7], 2.0 * PI);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn finite() -> impl Strategy<Value = f64> {
            -1e6f64..1e6
        }

        proptest! {
            #[test]
            fn canonical_round_trip(
                omega in 1e-3f64..10.0,
                pts in prop::collection::vec((finite(), finite(), finite(), finite()), 2..8),
                t_end in prop::option::of(1e-3f64..100.0),
                samples in prop::option::of(1usize..5000),
            ) {
                let z0: Vec<C64> = pts.iter().enumerate()
                    .map(|(k, p)| C64::new(p.0 + 1e7 * k as f64, p.1)).collect();
                let v0: Vec<C64> = pts.iter().map(|p| C64::new(p.2, p.3)).collect();
                let mut cfg = SystemConfig::new(omega, z0, v0).unwrap();
                if let Some(t) = t_end { cfg = cfg.with_t_end(t).unwrap(); }
                if let Some(s) = samples { cfg = cfg.with_samples(s).unwrap(); }
                let text = cfg.to_json();
                let back = parse_config(&text).unwrap();
                prop_assert_eq!(&back, &cfg);
                prop_assert_eq!(back.to_json(), text);
            }
        }
    }
}
