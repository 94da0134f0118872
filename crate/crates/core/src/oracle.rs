//! Brute-force enumeration of six-vertex configurations with domain wall
//! boundary conditions (DWBC) on the `N x N` lattice.
//!
//! Grid convention: row 0 is the top horizontal line, column 0 the leftmost
//! vertical line. The lattice coordinate `(r, s)` used by the emptiness
//! specs counts vertical lines from the right and horizontal lines from the
//! top, both one-based, so `(r, s)` is grid cell `(s - 1, N - r)`.
//!
//! Vertex types, as `(left, right, top, bottom)` edge arrows:
//!
//! | type | left | right | top | bottom |
//! |------|------|-------|-----|--------|
//! | 1    | R    | R     | U   | U      |
//! | 2    | L    | L     | D   | D      |
//! | 3    | R    | R     | D   | D      |
//! | 4    | L    | L     | U   | U      |
//! | 5    | R    | L     | U   | D      |
//! | 6    | L    | R     | D   | U      |
//!
//! DWBC fixes the left boundary arrows to L, the right ones to R, the top
//! ones to D and the bottom ones to U.

use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::exact::{powi, sqrt_exact, BigRational};
use crate::{Error, Result};

/// Default enumeration limit: `A(7) = 218348` configurations.
pub const DEFAULT_N_MAX: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub n_max: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl OracleConfig {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::SizeLimit { n, max: self.n_max });
        }
        if n == 0 {
            return Err(Error::domain("lattice size N must be positive"));
        }
        Ok(())
    }
}

// (right arrow is R, bottom arrow is U) per type, index 0 unused
const RIGHT_IS_R: [bool; 7] = [false, true, false, true, false, false, true];
const LEFT_IS_R: [bool; 7] = [false, true, false, true, false, true, false];
const BOTTOM_IS_U: [bool; 7] = [false, true, false, false, true, false, true];
const TOP_IS_U: [bool; 7] = [false, true, false, false, true, true, false];

/// Vertex types compatible with a given top and left arrow.
fn candidates(top_up: bool, left_right: bool) -> &'static [u8] {
    match (top_up, left_right) {
        (true, true) => &[1, 5],
        (false, false) => &[2, 6],
        (false, true) => &[3],
        (true, false) => &[4],
    }
}

/// The six Boltzmann weights.
///
/// The free-fermion parametrization `w1 = w2 = √(ρ(1-α))`, `w3 = w4 = √(ρα)`,
/// `w5 = 1`, `w6 = ρ` is stored through the squared weights, so a
/// configuration weight stays rational whenever types 1,2 and types 3,4
/// each occur an even number of times in total.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights {
    kind: WeightKind,
}

#[derive(Debug, Clone, PartialEq)]
enum WeightKind {
    General([BigRational; 6]),
    FreeFermion { rho: BigRational, alpha: BigRational },
}

impl VertexWeights {
    /// Arbitrary non-negative rational weights `w1..w6`.
    pub fn general(w: [BigRational; 6]) -> Result<Self> {
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::domain("vertex weights must be non-negative"));
        }
        Ok(VertexWeights {
            kind: WeightKind::General(w),
        })
    }

    /// The `(ρ, α)` free-fermion weights; `ρ > 0`, `α ∈ [0, 1]`.
    pub fn free_fermion(rho: BigRational, alpha: BigRational) -> Result<Self> {
        if !rho.is_positive() {
            return Err(Error::domain("ρ must be positive"));
        }
        if alpha.is_negative() || alpha > BigRational::one() {
            return Err(Error::domain("α must lie in [0, 1]"));
        }
        let w = VertexWeights {
            kind: WeightKind::FreeFermion { rho, alpha },
        };
        assert!(w.free_fermion_residual().is_zero());
        Ok(w)
    }

    /// Domino-counting weights `w1..w5 = 1`, `w6 = 2` (ρ = 2, α = 1/2).
    pub fn aztec() -> Self {
        VertexWeights::free_fermion(BigRational::from_integer(2.into()), crate::exact::ratio(1, 2))
            .expect("valid parameters")
    }

    /// Squared weight of type `t` (1..=6).
    pub fn squared(&self, t: usize) -> BigRational {
        assert!((1..=6).contains(&t), "vertex type out of range");
        match &self.kind {
            WeightKind::General(w) => &w[t - 1] * &w[t - 1],
            WeightKind::FreeFermion { rho, alpha } => match t {
                1 | 2 => rho * (BigRational::one() - alpha),
                3 | 4 => rho * alpha,
                5 => BigRational::one(),
                _ => rho * rho,
            },
        }
    }

    /// `w1 w2 + w3 w4 - w5 w6`, exact.
    pub fn free_fermion_residual(&self) -> BigRational {
        match &self.kind {
            WeightKind::General(w) => &w[0] * &w[1] + &w[2] * &w[3] - &w[4] * &w[5],
            WeightKind::FreeFermion { rho, .. } => {
                // w1 w2 = w1², w3 w4 = w3² since the paired weights coincide
                self.squared(1) + self.squared(3) - rho
            }
        }
    }

    /// Product of weights for the given per-type vertex counts.
    ///
    /// Counts may be negative, meaning division (used for cut-out regions).
    pub fn weight_of_counts(&self, counts: &[i64; 6]) -> Result<BigRational> {
        match &self.kind {
            WeightKind::General(w) => {
                let mut acc = BigRational::one();
                for (wi, &c) in w.iter().zip(counts) {
                    if c < 0 && wi.is_zero() {
                        return Err(Error::domain("division by a zero vertex weight"));
                    }
                    acc *= powi(wi, c);
                }
                Ok(acc)
            }
            WeightKind::FreeFermion { rho, .. } => {
                let mut acc = half_power(&self.squared(1), counts[0] + counts[1])?;
                acc *= half_power(&self.squared(3), counts[2] + counts[3])?;
                acc *= powi(rho, counts[5]);
                Ok(acc)
            }
        }
    }
}

/// `sq^{k/2}`, rational when `k` is even or `sq` is a perfect square.
fn half_power(sq: &BigRational, k: i64) -> Result<BigRational> {
    if k < 0 && sq.is_zero() {
        return Err(Error::domain("division by a zero vertex weight"));
    }
    if k % 2 == 0 {
        return Ok(powi(sq, k / 2));
    }
    match sqrt_exact(sq) {
        Some(root) => Ok(powi(&root, k)),
        None => Err(Error::IrrationalPrefactor(format!(
            "odd multiplicity {k} of a paired vertex type with squared weight {sq}"
        ))),
    }
}

/// One DWBC configuration, stored as the vertex type of every grid cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SixVertexConfig {
    n: usize,
    types: Vec<u8>,
}

impl SixVertexConfig {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertex type (1..=6) at grid row `row`, column `col`, both from 0.
    pub fn vertex(&self, row: usize, col: usize) -> u8 {
        self.types[row * self.n + col]
    }

    /// Vertex type at lattice coordinate `(r, s)`: `r`-th vertical line from
    /// the right, `s`-th horizontal line from the top, both one-based.
    pub fn at_lattice(&self, r: usize, s: usize) -> u8 {
        self.vertex(s - 1, self.n - r)
    }

    /// Whether the horizontal edge left of grid cell `(row, col)` points left.
    pub fn left_edge_points_left(&self, row: usize, col: usize) -> bool {
        !LEFT_IS_R[self.vertex(row, col) as usize]
    }

    pub fn counts(&self) -> [i64; 6] {
        let mut c = [0i64; 6];
        for &t in &self.types {
            c[t as usize - 1] += 1;
        }
        c
    }

    /// Checks the ice rule consistency of all shared edges and the DWBC
    /// boundary arrows.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for row in 0..n {
            for col in 0..n {
                let t = self.vertex(row, col) as usize;
                if !(1..=6).contains(&t) {
                    return false;
                }
                let left_ok = if col == 0 {
                    !LEFT_IS_R[t]
                } else {
                    LEFT_IS_R[t] == RIGHT_IS_R[self.vertex(row, col - 1) as usize]
                };
                let top_ok = if row == 0 {
                    !TOP_IS_U[t]
                } else {
                    TOP_IS_U[t] == BOTTOM_IS_U[self.vertex(row - 1, col) as usize]
                };
                let right_ok = col + 1 < n || RIGHT_IS_R[t];
                let bottom_ok = row + 1 < n || BOTTOM_IS_U[t];
                if !(left_ok && top_ok && right_ok && bottom_ok) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
struct RowOption {
    types: Vec<u8>,
    bottom: u32,
}

/// Depth-first stream over all DWBC configurations, row by row.
///
/// The state between rows is the bitmask of vertical edges pointing up.
/// Row transitions are memoized per incoming mask.
pub struct DwbcIter {
    n: usize,
    rows: Vec<Vec<u8>>,
    stack: Vec<(Rc<Vec<RowOption>>, usize)>,
    memo: HashMap<u32, Rc<Vec<RowOption>>>,
}

impl DwbcIter {
    fn new(n: usize) -> Self {
        let mut it = DwbcIter {
            n,
            rows: Vec::with_capacity(n),
            stack: Vec::with_capacity(n),
            memo: HashMap::new(),
        };
        let first = it.row_options(0);
        it.stack.push((first, 0));
        it
    }

    fn row_options(&mut self, top: u32) -> Rc<Vec<RowOption>> {
        if let Some(v) = self.memo.get(&top) {
            return v.clone();
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        fill_row(self.n, top, 0, false, 0, &mut cur, &mut out);
        let rc = Rc::new(out);
        self.memo.insert(top, rc.clone());
        rc
    }
}

fn fill_row(
    n: usize,
    top: u32,
    col: usize,
    left_right: bool,
    bottom: u32,
    cur: &mut Vec<u8>,
    out: &mut Vec<RowOption>,
) {
    if col == n {
        if left_right {
            out.push(RowOption {
                types: cur.clone(),
                bottom,
            });
        }
        return;
    }
    let top_up = top >> col & 1 == 1;
    for &t in candidates(top_up, left_right) {
        let t_us = t as usize;
        cur.push(t);
        let b = if BOTTOM_IS_U[t_us] { bottom | 1 << col } else { bottom };
        fill_row(n, top, col + 1, RIGHT_IS_R[t_us], b, cur, out);
        cur.pop();
    }
}

impl Iterator for DwbcIter {
    type Item = SixVertexConfig;

    fn next(&mut self) -> Option<SixVertexConfig> {
        let full = (1u32 << self.n) - 1;
        while let Some((opts, idx)) = self.stack.last_mut() {
            if *idx >= opts.len() {
                self.stack.pop();
                continue;
            }
            let opt = opts[*idx].clone();
            *idx += 1;
            let level = self.stack.len();
            self.rows.truncate(level - 1);
            self.rows.push(opt.types);
            if level == self.n {
                if opt.bottom == full {
                    return Some(SixVertexConfig {
                        n: self.n,
                        types: self.rows.concat(),
                    });
                }
                continue;
            }
            let next = self.row_options(opt.bottom);
            self.stack.push((next, 0));
        }
        None
    }
}

/// Streams every DWBC configuration of the `N x N` lattice exactly once.
pub fn enumerate_dwbc(n: usize, cfg: &OracleConfig) -> Result<DwbcIter> {
    cfg.check(n)?;
    Ok(DwbcIter::new(n))
}

/// Geometry of a generalized emptiness formation probability: the `s`
/// edges left of lattice vertices `(r_j, j)`, `r` weakly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmptinessSpec {
    n: usize,
    r: Vec<usize>,
}

impl EmptinessSpec {
    pub fn new(n: usize, r: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("N must be positive"));
        }
        if r.len() > n {
            return Err(Error::domain("s must not exceed N"));
        }
        if r.iter().any(|&x| x < 1 || x > n) {
            return Err(Error::domain("every r_j must lie in [1, N]"));
        }
        if r.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("r_j must be weakly increasing"));
        }
        Ok(EmptinessSpec { n, r })
    }

    /// The triangular specialization `r_j = N - s + j - 1`, `N = r + s`.
    pub fn triangular(r: usize, s: usize) -> Result<Self> {
        let n = r + s;
        Self::new(n, (1..=s).map(|j| n - s + j - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// The Ferrers diagram `λ = (N - r_1, ..., N - r_s)`.
    pub fn partition(&self) -> Vec<usize> {
        self.r.iter().map(|&x| self.n - x).collect()
    }

    /// Every valid spec on the `N x N` lattice, all `s` from 0 to `N`.
    pub fn all(n: usize) -> Vec<EmptinessSpec> {
        fn rec(n: usize, s: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<EmptinessSpec>) {
            if cur.len() == s {
                out.push(EmptinessSpec { n, r: cur.clone() });
                return;
            }
            for v in lo..=n {
                cur.push(v);
                rec(n, s, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for s in 0..=n {
            rec(n, s, 1, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// The two equivalent GEFP events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GefpFilter {
    /// Every edge `e_j` left of vertex `(r_j, j)` points left.
    LeftwardEdges,
    /// The `λ` corner region is made of type-2 vertices only.
    FrozenCorner,
}

impl GefpFilter {
    pub fn accepts(self, spec: &EmptinessSpec, c: &SixVertexConfig) -> bool {
        let n = spec.n;
        match self {
            GefpFilter::LeftwardEdges => spec
                .r
                .iter()
                .enumerate()
                .all(|(j, &rj)| c.left_edge_points_left(j, n - rj)),
            GefpFilter::FrozenCorner => spec
                .r
                .iter()
                .enumerate()
                .all(|(j, &rj)| (0..n - rj).all(|col| c.vertex(j, col) == 2)),
        }
    }
}

/// All configurations of one lattice size, kept in memory so that many
/// weights and specs can be evaluated against the same enumeration.
pub struct Ensemble {
    n: usize,
    configs: Vec<SixVertexConfig>,
}

impl Ensemble {
    pub fn enumerate(n: usize, cfg: &OracleConfig) -> Result<Self> {
        Ok(Ensemble {
            n,
            configs: enumerate_dwbc(n, cfg)?.collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn configs(&self) -> &[SixVertexConfig] {
        &self.configs
    }

    /// Weighted sum over the configurations accepted by `keep`, grouping
    /// equal count vectors first so each distinct weight is computed once.
    /// `shift` is added to every count vector before weighting.
    fn weighted_sum(
        &self,
        w: &VertexWeights,
        shift: &[i64; 6],
        keep: impl Fn(&SixVertexConfig) -> bool,
    ) -> Result<BigRational> {
        let mut hist: HashMap<[i64; 6], u64> = HashMap::new();
        for c in self.configs.iter().filter(|c| keep(c)) {
            *hist.entry(c.counts()).or_default() += 1;
        }
        let mut keys: Vec<_> = hist.into_iter().collect();
        keys.sort();
        let mut total = BigRational::zero();
        for (mut counts, mult) in keys {
            for (c, d) in counts.iter_mut().zip(shift) {
                *c += d;
            }
            total += w.weight_of_counts(&counts)? * BigRational::from_integer(mult.into());
        }
        Ok(total)
    }

    pub fn partition_function(&self, w: &VertexWeights) -> Result<BigRational> {
        self.weighted_sum(w, &[0; 6], |_| true)
    }

    pub fn gefp_with(&self, spec: &EmptinessSpec, w: &VertexWeights, filter: GefpFilter) -> Result<BigRational> {
        if spec.n != self.n {
            return Err(Error::domain("spec lattice size differs from ensemble"));
        }
        let z = self.partition_function(w)?;
        if z.is_zero() {
            return Err(Error::domain("partition function vanishes"));
        }
        Ok(self.weighted_sum(w, &[0; 6], |c| filter.accepts(spec, c))? / z)
    }

    /// GEFP by both filters; panics if they ever disagree.
    pub fn gefp(&self, spec: &EmptinessSpec, w: &VertexWeights) -> Result<BigRational> {
        let by_edges = self.gefp_with(spec, w, GefpFilter::LeftwardEdges)?;
        let by_corner = self.gefp_with(spec, w, GefpFilter::FrozenCorner)?;
        assert_eq!(by_edges, by_corner, "GEFP filters disagree for {spec:?}");
        Ok(by_edges)
    }

    /// Partition function of the lattice with the frozen triangle of size
    /// `s` removed from the top-left corner (`N = r + s`): the sum over
    /// configurations with that triangle frozen, with its `s(s+1)/2` type-2
    /// weights divided out.
    pub fn restricted_partition_function(&self, s: usize, w: &VertexWeights) -> Result<BigRational> {
        if s >= self.n {
            return Err(Error::domain("need r = N - s >= 1"));
        }
        let spec = EmptinessSpec::triangular(self.n - s, s)?;
        let frozen = (s * (s + 1) / 2) as i64;
        self.weighted_sum(w, &[0, -frozen, 0, 0, 0, 0], |c| {
            GefpFilter::FrozenCorner.accepts(&spec, c)
        })
    }
}

/// `Z_N` by direct summation over all configurations.
pub fn z_bruteforce(n: usize, w: &VertexWeights, cfg: &OracleConfig) -> Result<BigRational> {
    Ensemble::enumerate(n, cfg)?.partition_function(w)
}

/// GEFP by direct summation; both event filters are evaluated and must agree.
pub fn gefp_bruteforce(spec: &EmptinessSpec, w: &VertexWeights, cfg: &OracleConfig) -> Result<BigRational> {
    Ensemble::enumerate(spec.n, cfg)?.gefp(spec, w)
}

/// `Z_{r,s}` of the pentagonal lattice by direct summation.
pub fn z_restricted_bruteforce(r: usize, s: usize, w: &VertexWeights, cfg: &OracleConfig) -> Result<BigRational> {
    Ensemble::enumerate(r + s, cfg)?.restricted_partition_function(s, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn ff(rho: (i64, i64), alpha: (i64, i64)) -> VertexWeights {
        VertexWeights::free_fermion(ratio(rho.0, rho.1), ratio(alpha.0, alpha.1)).unwrap()
    }

    #[test]
    fn single_vertex_is_type_six() {
        let all: Vec<_> = enumerate_dwbc(1, &OracleConfig::default()).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].vertex(0, 0), 6);
    }

    #[test]
    fn counts_for_small_n() {
        let cfg = OracleConfig::default();
        assert_eq!(enumerate_dwbc(3, &cfg).unwrap().count(), 7);
        assert_eq!(enumerate_dwbc(5, &cfg).unwrap().count(), 429);
    }

    #[test]
    fn every_configuration_is_valid_and_distinct() {
        let cfg = OracleConfig::default();
        let all: Vec<_> = enumerate_dwbc(5, &cfg).unwrap().collect();
        assert!(all.iter().all(SixVertexConfig::is_valid));
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for c in &all {
            let k = c.counts();
            assert_eq!(k[5] - k[4], 5);
        }
    }

    #[test]
    fn size_limit() {
        let cfg = OracleConfig { n_max: 4 };
        assert!(matches!(enumerate_dwbc(5, &cfg), Err(Error::SizeLimit { n: 5, max: 4 })));
        assert!(enumerate_dwbc(0, &cfg).is_err());
    }

    #[test]
    fn free_fermion_partition_functions() {
        let cfg = OracleConfig::default();
        assert_eq!(z_bruteforce(1, &ff((2, 1), (1, 2)), &cfg).unwrap(), ratio(2, 1));
        assert_eq!(z_bruteforce(4, &ff((2, 1), (1, 2)), &cfg).unwrap(), ratio(1024, 1));
        assert_eq!(z_bruteforce(3, &ff((1, 1), (1, 3)), &cfg).unwrap(), ratio(1, 1));
    }

    #[test]
    fn general_weights_at_unit_values_count_configurations() {
        let one = ratio(1, 1);
        let w = VertexWeights::general(std::array::from_fn(|_| one.clone())).unwrap();
        let z = z_bruteforce(4, &w, &OracleConfig::default()).unwrap();
        assert_eq!(z, ratio(42, 1));
    }

    #[test]
    fn free_fermion_constructor_checks() {
        assert!(VertexWeights::free_fermion(ratio(0, 1), ratio(1, 2)).is_err());
        assert!(VertexWeights::free_fermion(ratio(1, 1), ratio(3, 2)).is_err());
        assert_eq!(ff((3, 2), (1, 4)).free_fermion_residual(), ratio(0, 1));
        assert_eq!(VertexWeights::aztec().squared(6), ratio(4, 1));
    }

    #[test]
    fn empty_spec_has_probability_one() {
        let spec = EmptinessSpec::new(3, vec![]).unwrap();
        let g = gefp_bruteforce(&spec, &ff((1, 1), (1, 3)), &OracleConfig::default()).unwrap();
        assert_eq!(g, ratio(1, 1));
    }

    #[test]
    fn two_by_two_corner() {
        // vertex (1,1) is the top-right cell; its left edge points left iff
        // the top-left cell is type 2, which has probability 1 - α
        let spec = EmptinessSpec::new(2, vec![1]).unwrap();
        for a in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let w = VertexWeights::free_fermion(ratio(1, 1), a.clone()).unwrap();
            let g = gefp_bruteforce(&spec, &w, &OracleConfig::default()).unwrap();
            assert_eq!(g, ratio(1, 1) - a);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(EmptinessSpec::new(3, vec![2, 1]).is_err());
        assert!(EmptinessSpec::new(3, vec![0]).is_err());
        assert!(EmptinessSpec::new(3, vec![4]).is_err());
        assert!(EmptinessSpec::new(2, vec![1, 1, 2]).is_err());
        let t = EmptinessSpec::triangular(3, 2).unwrap();
        assert_eq!(t.r(), &[3, 4]);
        assert_eq!(t.partition(), vec![2, 1]);
        // Σ_s C(N+s-1, s) for N = 3: 1 + 3 + 6 + 10
        assert_eq!(EmptinessSpec::all(3).len(), 20);
    }

    #[test]
    fn alpha_zero_freezes_the_triangle() {
        let cfg = OracleConfig::default();
        let w = ff((1, 1), (0, 1));
        for (r, s) in [(1, 1), (2, 2), (3, 1), (1, 3)] {
            let spec = EmptinessSpec::triangular(r, s).unwrap();
            assert_eq!(gefp_bruteforce(&spec, &w, &cfg).unwrap(), ratio(1, 1));
        }
    }
}
