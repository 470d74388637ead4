//! One-parameter families phi + theta * l(x) for a nonnegative weighted
//! Hamming statistic l: exact tracing of the concave envelope
//! min_x [phi(x) + theta * l(x)], the energy-distance plot it induces, beta
//! tuning for geometry families, and ordered enumeration of near-optimal
//! sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::landscape::{nearest_optimal, weighted_distance};
use crate::mincut::one_optimum;
use crate::model::{
    build_phi_from_geometry, format_rational, FitnessFunction, Geometry, HpSequence, Rational,
};

/// A value line theta -> intercept + slope * theta; the intercept is
/// phi(x) and the slope l(x) of one sequence x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Line {
    pub fn at(&self, theta: &Rational) -> Rational {
        &self.intercept + &self.slope * theta
    }
}

/// Piecewise-linear concave function on [lo, hi]: the pointwise minimum of
/// the value lines over all sequences. Corners are strictly increasing in
/// theta, piece slopes strictly decreasing.
#[derive(Clone, Debug)]
pub struct ConcaveEnvelope {
    lo: Rational,
    hi: Rational,
    corners: Vec<(Rational, Rational)>,
    pieces: Vec<Line>,
}

impl ConcaveEnvelope {
    pub fn bounds(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    /// Interior corners (theta, envelope value), strictly increasing.
    pub fn corners(&self) -> &[(Rational, Rational)] {
        &self.corners
    }

    /// The corners.len() + 1 linear pieces, left to right.
    pub fn pieces(&self) -> &[Line] {
        &self.pieces
    }

    /// Envelope value; extrapolates with the outermost piece outside
    /// [lo, hi].
    pub fn value_at(&self, theta: &Rational) -> Rational {
        let k = self.corners.partition_point(|(t, _)| t < theta);
        self.pieces[k].at(theta)
    }
}

struct Prober<'a> {
    phi: &'a FitnessFunction,
    target: &'a HpSequence,
    weights: &'a [Rational],
    neg_weights: Vec<Rational>,
}

impl<'a> Prober<'a> {
    /// The value lines at theta of the slope-extreme optima of
    /// phi + theta * l: steepest (max l) first.
    fn probe(&self, theta: &Rational) -> Result<(Line, Line)> {
        let shifted = self.at_theta(theta)?;
        let steep = self.line_of(&nearest_optimal(&shifted, self.target, &self.neg_weights)?)?;
        let flat = self.line_of(&nearest_optimal(&shifted, self.target, self.weights)?)?;
        debug_assert_eq!(steep.at(theta), flat.at(theta), "both probes are optimal");
        Ok((steep, flat))
    }

    /// phi + theta * l up to an additive constant, which cannot change the
    /// optimum set; values are always read off the original phi.
    fn at_theta(&self, theta: &Rational) -> Result<FitnessFunction> {
        let phi = self.phi;
        let pairs = phi
            .pairs()
            .iter()
            .enumerate()
            .map(|(k, &ij)| (ij, phi.pair_coeff(k)))
            .collect();
        let linear = (0..phi.n())
            .map(|i| {
                let w = theta * &self.weights[i];
                phi.linear_coeff(i) + if self.target.get(i) { -w } else { w }
            })
            .collect();
        FitnessFunction::new(phi.n(), pairs, linear)
    }

    fn line_of(&self, x: &HpSequence) -> Result<Line> {
        Ok(Line {
            slope: weighted_distance(x, self.target, self.weights)?,
            intercept: self.phi.evaluate(x)?,
        })
    }
}

/// Exact concave envelope of min_x [phi(x) + theta * l(x)] over
/// theta in [lo, hi], where l(x) = sum w_i |x_i - target_i| with w >= 0.
/// The caller must pick a range containing every corner. One or two
/// min-cut solves per probe, O(#pieces) probes.
pub fn trace_envelope(
    phi: &FitnessFunction,
    target: &HpSequence,
    weights: &[Rational],
    lo: Rational,
    hi: Rational,
) -> Result<ConcaveEnvelope> {
    if lo >= hi {
        return Err(Error::Range(format!(
            "envelope range [{}, {}] is empty",
            format_rational(&lo),
            format_rational(&hi)
        )));
    }
    for (i, w) in weights.iter().enumerate() {
        if w.is_negative() {
            return Err(Error::NegativeWeight { index: i });
        }
    }
    let prober = Prober {
        phi,
        target,
        weights,
        neg_weights: weights.iter().map(|w| -w).collect(),
    };
    // The piece extending right from lo is the flattest line optimal at lo;
    // symmetrically at hi.
    let (_, first) = prober.probe(&lo)?;
    let (last, _) = prober.probe(&hi)?;
    let mut corners: Vec<Corner> = Vec::new();
    refine(&prober, &lo, &first, &hi, &last, &mut corners)?;
    corners.sort_by(|a, b| a.theta.cmp(&b.theta));

    let mut pieces = vec![first];
    let mut flat = Vec::with_capacity(corners.len());
    for corner in corners {
        debug_assert_eq!(corner.left.slope, pieces.last().unwrap().slope);
        debug_assert_eq!(corner.left.at(&corner.theta), corner.value);
        debug_assert_eq!(corner.right.at(&corner.theta), corner.value);
        debug_assert!(corner.right.slope < pieces.last().unwrap().slope);
        pieces.push(corner.right);
        flat.push((corner.theta, corner.value));
    }
    debug_assert_eq!(pieces.last().unwrap().slope, last.slope);
    Ok(ConcaveEnvelope {
        lo,
        hi,
        corners: flat,
        pieces,
    })
}

struct Corner {
    theta: Rational,
    value: Rational,
    left: Line,
    right: Line,
}

/// Finds every corner between theta_a and theta_b given the envelope
/// pieces `left` (extending right from theta_a) and `right` (extending
/// left from theta_b). Probing where the two pieces cross either certifies
/// them adjacent or splits the interval on a new piece.
fn refine(
    prober: &Prober,
    theta_a: &Rational,
    left: &Line,
    theta_b: &Rational,
    right: &Line,
    corners: &mut Vec<Corner>,
) -> Result<()> {
    if left.slope == right.slope {
        debug_assert_eq!(left.intercept, right.intercept);
        return Ok(());
    }
    let cross = (&right.intercept - &left.intercept) / (&left.slope - &right.slope);
    debug_assert!(*theta_a < cross && cross < *theta_b);
    let (steep, flat) = prober.probe(&cross)?;
    if steep.slope != flat.slope {
        corners.push(Corner {
            value: steep.at(&cross),
            left: steep.clone(),
            right: flat.clone(),
            theta: cross.clone(),
        });
    }
    refine(prober, theta_a, left, &cross, &steep, corners)?;
    refine(prober, &cross, &flat, theta_b, right, corners)
}

/// Exact minimum fitness per Hamming-distance shell at the envelope's
/// breakpoint distances, with a certified lower bound in between (the
/// exact in-between values are NP-hard).
#[derive(Clone, Debug)]
pub struct LandscapePlot {
    breakpoints: Vec<(usize, Rational)>,
}

impl LandscapePlot {
    /// Breakpoints (d, F(d)) with strictly decreasing d, from d = n to
    /// d = 0.
    pub fn breakpoints(&self) -> &[(usize, Rational)] {
        &self.breakpoints
    }

    /// Exact F(d) where known.
    pub fn exact_f(&self, d: usize) -> Option<&Rational> {
        self.breakpoints
            .iter()
            .find(|&&(b, _)| b == d)
            .map(|(_, f)| f)
    }

    /// Lower bound on F(d): exact at breakpoints, linear interpolation
    /// between the neighboring breakpoints otherwise.
    pub fn lower_bound(&self, d: usize) -> Result<Rational> {
        if d > self.breakpoints[0].0 {
            return Err(Error::PlotDomain(d.to_string()));
        }
        if let Some(f) = self.exact_f(d) {
            return Ok(f.clone());
        }
        let k = self.breakpoints.partition_point(|&(b, _)| b > d);
        let (d_hi, f_hi) = &self.breakpoints[k - 1];
        let (d_lo, f_lo) = &self.breakpoints[k];
        let lambda = Rational::new(BigInt::from(d - d_lo), BigInt::from(d_hi - d_lo));
        Ok(&lambda * f_hi + (Rational::one() - lambda) * f_lo)
    }
}

/// Traces the envelope of phi + theta * |x - target| over the provably
/// sufficient range [-2W, 2W], W = 1 + sum a + sum |b|, and reads off the
/// energy-distance breakpoints: the piece with slope d has intercept F(d),
/// the exact minimum of phi at Hamming distance d from the target.
pub fn energy_distance_landscape(
    phi: &FitnessFunction,
    target: &HpSequence,
) -> Result<(ConcaveEnvelope, LandscapePlot)> {
    let w = Rational::one() + phi.sum_pair_coeffs() + phi.sum_abs_linear();
    let hi = Rational::from_integer(BigInt::from(2)) * w;
    let unit = vec![Rational::one(); phi.n()];
    let envelope = trace_envelope(phi, target, &unit, -hi.clone(), hi)?;
    let breakpoints: Vec<(usize, Rational)> = envelope
        .pieces()
        .iter()
        .map(|p| {
            debug_assert!(p.slope.is_integer());
            (
                p.slope.to_integer().try_into().expect("slopes count residues"),
                p.intercept.clone(),
            )
        })
        .collect();
    let first = breakpoints[0].0;
    let last = breakpoints.last().unwrap().0;
    if first != phi.n() || last != 0 {
        return Err(Error::Range(format!(
            "breakpoints span {}..{} instead of {}..0; the probe range missed corners",
            first,
            last,
            phi.n()
        )));
    }
    Ok((envelope, LandscapePlot { breakpoints }))
}

/// The family phi_beta(x) = -sum a_ij x_i x_j + beta * sum s_i x_i with
/// fixed contact strengths a >= 0 and surface exposures s >= 0.
#[derive(Clone, Debug)]
pub struct BetaFamily {
    n: usize,
    pairs: Vec<((usize, usize), Rational)>,
    surface: Vec<Rational>,
}

impl BetaFamily {
    pub fn new(
        n: usize,
        pairs: Vec<((usize, usize), Rational)>,
        surface: Vec<Rational>,
    ) -> Result<Self> {
        if surface.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: surface.len(),
            });
        }
        for (i, s) in surface.iter().enumerate() {
            if s.is_negative() {
                return Err(Error::NegativeWeight { index: i });
            }
        }
        // Delegate pair validation (index order, nonnegativity, duplicates).
        FitnessFunction::new(n, pairs.clone(), vec![Rational::zero(); n])?;
        Ok(BetaFamily { n, pairs, surface })
    }

    /// Contact strengths from the backbone at the canonical scale
    /// alpha = -1, exposures straight from the geometry.
    pub fn from_geometry(geom: &Geometry) -> Result<Self> {
        let phi = build_phi_from_geometry(geom, &-Rational::one(), &Rational::one())?;
        BetaFamily::new(
            geom.n(),
            phi.pairs()
                .iter()
                .enumerate()
                .map(|(k, &ij)| (ij, phi.pair_coeff(k)))
                .collect(),
            (0..geom.n()).map(|i| phi.linear_coeff(i)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn surface(&self) -> &[Rational] {
        &self.surface
    }

    pub fn phi_at(&self, beta: &Rational) -> FitnessFunction {
        FitnessFunction::new(
            self.n,
            self.pairs.clone(),
            self.surface.iter().map(|s| beta * s).collect(),
        )
        .expect("coefficients were validated at construction")
    }

    /// Upper end of the beta range that provably contains every corner:
    /// (1 + sum a) / min nonzero s. None when every s_i is zero (the
    /// family is constant in beta).
    pub fn beta_limit(&self) -> Option<Rational> {
        let s_min = self
            .surface
            .iter()
            .filter(|s| !s.is_zero())
            .min()
            .cloned()?;
        let total = self
            .pairs
            .iter()
            .fold(Rational::one(), |acc, (_, a)| acc + a);
        Some(total / s_min)
    }

    /// Corners of min_x phi_beta(x) over beta >= 0: the conventional
    /// leftmost corner (0, min phi_0) followed by the interior corners.
    pub fn corners(&self) -> Result<Vec<(Rational, Rational)>> {
        let phi0 = self.phi_at(&Rational::zero());
        let mut corners = vec![(Rational::zero(), one_optimum(&phi0).1)];
        if let Some(limit) = self.beta_limit() {
            let all_p = HpSequence::from_bits(vec![false; self.n]);
            let envelope = trace_envelope(&phi0, &all_p, &self.surface, Rational::zero(), limit)?;
            corners.extend(envelope.corners().iter().cloned());
        }
        Ok(corners)
    }
}

/// Values of beta whose optimum set comes nearest the target: the corners
/// and open segments achieving the minimum weighted nearest-distance.
#[derive(Clone, Debug)]
pub struct TuningResult {
    pub d_min: Rational,
    pub points: Vec<Rational>,
    /// Open intervals (lo, hi); None is the unbounded right end.
    pub intervals: Vec<(Rational, Option<Rational>)>,
}

/// Scans beta >= 0 for the optimum sets nearest `target` under weights
/// `w`. Corners dominate their neighboring segments (the segment optimum
/// sets are subsets of the corner ones), so the minimum over corners is
/// the global minimum; each open segment is then certified by its midpoint
/// sample (the optimum set is constant on open segments).
pub fn tune_beta(
    family: &BetaFamily,
    target: &HpSequence,
    w: &[Rational],
) -> Result<TuningResult> {
    let corners = family.corners()?;
    let distance_at = |beta: &Rational| -> Result<Rational> {
        let x = nearest_optimal(&family.phi_at(beta), target, w)?;
        weighted_distance(&x, target, w)
    };
    let mut corner_distances = Vec::with_capacity(corners.len());
    for (beta, _) in &corners {
        corner_distances.push(distance_at(beta)?);
    }
    let d_min = corner_distances.iter().min().unwrap().clone();
    let points: Vec<Rational> = corners
        .iter()
        .zip(&corner_distances)
        .filter(|(_, d)| **d == d_min)
        .map(|((beta, _), _)| beta.clone())
        .collect();
    let mut intervals = Vec::new();
    for (k, (beta, _)) in corners.iter().enumerate() {
        let right = corners.get(k + 1).map(|(b, _)| b.clone());
        let sample = match &right {
            Some(b) => (beta + b) / Rational::from_integer(BigInt::from(2)),
            None => beta + Rational::one(),
        };
        if distance_at(&sample)? == d_min {
            intervals.push((beta.clone(), right));
        }
    }
    Ok(TuningResult {
        d_min,
        points,
        intervals,
    })
}

// ── Ordered near-optimal enumeration ────────────────────────────────────────

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    value: BigInt,
    bits: Vec<bool>,
    fixed: usize,
}

/// All 2^n sequences in nondecreasing fitness order, lazily. Each emitted
/// sequence spawns at most n subproblems fixing one more prefix bit to the
/// opposite value; the subproblem spaces partition the remainder, so no
/// sequence repeats. Heap ties break by sequence order (P before H).
pub struct SuboptimalIter<'a> {
    phi: &'a FitnessFunction,
    heap: BinaryHeap<Reverse<Entry>>,
}

pub fn suboptimal_stream(phi: &FitnessFunction) -> SuboptimalIter<'_> {
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(minimize_with_prefix(phi, &[])));
    SuboptimalIter { phi, heap }
}

impl Iterator for SuboptimalIter<'_> {
    type Item = (HpSequence, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse(entry) = self.heap.pop()?;
        for i in entry.fixed..self.phi.n() {
            let mut prefix = entry.bits[..=i].to_vec();
            prefix[i] = !prefix[i];
            self.heap.push(Reverse(minimize_with_prefix(self.phi, &prefix)));
        }
        Some((
            HpSequence::from_bits(entry.bits),
            Rational::new(entry.value, self.phi.denom().clone()),
        ))
    }
}

/// Minimizes phi over sequences extending `prefix`: cross terms with a
/// fixed H fold into the free linear coefficients, fully fixed terms drop
/// (the emitted value is re-read from the original phi), and the remainder
/// is a fresh instance for the cut solver.
fn minimize_with_prefix(phi: &FitnessFunction, prefix: &[bool]) -> Entry {
    let k = prefix.len();
    let free = phi.n() - k;
    let mut bits = prefix.to_vec();
    if free == 0 {
        return Entry {
            value: phi.evaluate_scaled_bits(&bits),
            bits,
            fixed: k,
        };
    }
    let mut linear: Vec<BigInt> = (k..phi.n()).map(|i| phi.linear_scaled(i).clone()).collect();
    let mut pairs: Vec<((usize, usize), BigInt)> = Vec::new();
    for (idx, &(i, j)) in phi.pairs().iter().enumerate() {
        let a = phi.pair_scaled(idx);
        if i >= k {
            pairs.push(((i - k, j - k), a.clone()));
        } else if j >= k && prefix[i] {
            linear[j - k] -= a;
        }
    }
    let reduced = FitnessFunction::from_integers(free, pairs, linear)
        .expect("reduction preserves coefficient validity");
    let (suffix, _) = one_optimum(&reduced);
    bits.extend_from_slice(suffix.bits());
    Entry {
        value: phi.evaluate_scaled_bits(&bits),
        bits,
        fixed: k,
    }
}
