//! Core model types: H/P sequences, backbone geometry, and the quadratic
//! fitness function
//!
//!   f(x) = -sum a_ij x_i x_j + sum b_i x_i,   a_ij >= 0,
//!
//! over binary sequences x (H = 1, P = 0). All coefficients are exact
//! rationals; a common denominator `c` is tracked so every computation on
//! coefficients can run over plain integers scaled by `c`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Largest number of fractional digits a decimal literal may carry.
pub const MAX_FRACTION_DIGITS: usize = 9;

/// Hydrophobic amino-acid letters; the other eleven codes map to P.
pub const HYDROPHOBIC: &[char] = &['A', 'C', 'F', 'I', 'L', 'M', 'V', 'W', 'Y'];

const AMINO_ACIDS: &str = "ACDEFGHIKLMNPQRSTVWY";

// ── Exact decimal handling ──────────────────────────────────────────────────

/// Parses a decimal literal with at most nine fractional digits into an
/// exact rational (denominator a power of ten).
pub fn rationalize(text: &str) -> Result<Rational> {
    let bad = || Error::BadDecimal {
        text: text.to_string(),
    };
    let (sign, rest) = match text.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if rest.contains('.') && frac_part.is_empty() {
        return Err(bad());
    }
    if frac_part.len() > MAX_FRACTION_DIGITS {
        return Err(Error::PrecisionExceeded {
            text: text.to_string(),
            max: MAX_FRACTION_DIGITS,
        });
    }
    let digits: String = [int_part, frac_part].concat();
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(Rational::new(BigInt::from(sign) * numer, denom))
}

/// Parses either a decimal literal or an explicit `p/q` rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    match text.split_once('/') {
        None => rationalize(text),
        Some((p, q)) => {
            let bad = || Error::BadRational {
                text: text.to_string(),
            };
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Renders a rational exactly: as a decimal when the reduced denominator is a
/// power of ten, otherwise as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    let denom = r.denom();
    let mut k = 0u32;
    let mut rest = denom.clone();
    let ten = BigInt::from(10u32);
    while (&rest % &ten).is_zero() {
        rest /= &ten;
        k += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    if k == 0 {
        return r.numer().to_string();
    }
    let scale = ten.pow(k);
    let digits = r.numer().abs();
    let int_part = &digits / &scale;
    let frac_part = &digits % &scale;
    let sign = if r.numer().is_negative() { "-" } else { "" };
    format!(
        "{}{}.{:0>width$}",
        sign,
        int_part,
        frac_part.to_string(),
        width = k as usize
    )
}

// ── Sequences ───────────────────────────────────────────────────────────────

/// A binary hydrophobic/polar sequence. H is 1, P is 0; `Ord` is
/// lexicographic with P < H.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HpSequence {
    bits: Vec<bool>,
}

impl HpSequence {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        HpSequence { bits }
    }

    /// Sequence of length `n` decoded from the low `n` bits of `mask`
    /// (bit `i` is residue `i`).
    pub fn from_mask(mask: u32, n: usize) -> Self {
        HpSequence {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Number of H residues.
    pub fn count_h(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Unweighted Hamming distance.
    pub fn hamming(&self, other: &HpSequence) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "H" } else { "P" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpSequence({})", self)
    }
}

impl FromStr for HpSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                'H' | 'h' => Ok(true),
                'P' | 'p' => Ok(false),
                _ => Err(Error::BadHpLetter { ch, pos: i + 1 }),
            })
            .collect::<Result<Vec<_>>>()
            .map(HpSequence::from_bits)
    }
}

/// Maps an amino-acid string to its H/P sequence. Errors name the first
/// invalid letter and its 1-based position.
pub fn hp_encode(amino: &str) -> Result<HpSequence> {
    amino
        .chars()
        .enumerate()
        .map(|(i, ch)| {
            let up = ch.to_ascii_uppercase();
            if !AMINO_ACIDS.contains(up) {
                return Err(Error::BadAminoAcid { ch, pos: i + 1 });
            }
            Ok(HYDROPHOBIC.contains(&up))
        })
        .collect::<Result<Vec<_>>>()
        .map(HpSequence::from_bits)
}

// ── Geometry ────────────────────────────────────────────────────────────────

/// One residue of a fixed backbone: side-chain centroid position, solvent
/// accessible surface area, and optionally the native amino-acid letter.
#[derive(Clone, Debug)]
pub struct Residue {
    pub pos: [f64; 3],
    pub surface: Rational,
    pub native: Option<char>,
}

/// A fixed backbone conformation.
#[derive(Clone, Debug)]
pub struct Geometry {
    residues: Vec<Residue>,
}

impl Geometry {
    pub fn new(residues: Vec<Residue>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::Geometry("no residues".to_string()));
        }
        for (i, r) in residues.iter().enumerate() {
            if r.surface.is_negative() {
                return Err(Error::Geometry(format!(
                    "surface area of residue {} is negative",
                    i + 1
                )));
            }
            if r.pos.iter().any(|v| !v.is_finite()) {
                return Err(Error::Geometry(format!(
                    "coordinates of residue {} are not finite",
                    i + 1
                )));
            }
        }
        Ok(Geometry { residues })
    }

    pub fn n(&self) -> usize {
        self.residues.len()
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    /// Euclidean centroid distance between residues `i` and `j` (0-based).
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let a = &self.residues[i].pos;
        let b = &self.residues[j].pos;
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// H/P encoding of the native letters, if every residue carries one.
    pub fn native_sequence(&self) -> Option<Result<HpSequence>> {
        let letters: Option<String> = self.residues.iter().map(|r| r.native).collect();
        letters.map(|s| hp_encode(&s))
    }
}

/// Contact strength 1/(1+exp(d-6.5)) for 0 < d <= 6.5, exactly 0 beyond.
pub fn sigmoid_g(d: f64) -> Result<f64> {
    // The comparison is written to also reject NaN.
    if d <= 0.0 || d.is_nan() {
        return Err(Error::BadDistance(d));
    }
    if d > 6.5 {
        Ok(0.0)
    } else {
        Ok(1.0 / (1.0 + (d - 6.5).exp()))
    }
}

/// Rounds a contact strength to nine decimals and returns it as an exact
/// rational over 10^9.
fn rationalize_g(g: f64) -> Rational {
    let scale = 1_000_000_000i64;
    let scaled = (g * scale as f64).round() as i64;
    Rational::new(BigInt::from(scaled), BigInt::from(scale))
}

pub fn default_alpha() -> Rational {
    Rational::from_integer(BigInt::from(-2))
}

pub fn default_beta() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(3))
}

// ── Fitness function ────────────────────────────────────────────────────────

/// The quadratic fitness function in F1 form. Pair coefficients are kept
/// sorted by (i, j) with i < j and are all strictly positive; zero terms are
/// dropped on construction. `denom` is the least common denominator `c`, so
/// `pair_scaled` and `linear_scaled` are the integer coefficients c*a, c*b.
#[derive(Clone, Debug)]
pub struct FitnessFunction {
    n: usize,
    pairs: Vec<(usize, usize)>,
    pair_scaled: Vec<BigInt>,
    linear_scaled: Vec<BigInt>,
    denom: BigInt,
}

impl FitnessFunction {
    /// Builds a fitness function from exact rational coefficients.
    /// `pairs` uses 0-based residue indexes with i < j and a_ij >= 0.
    pub fn new(n: usize, pairs: Vec<((usize, usize), Rational)>, linear: Vec<Rational>) -> Result<Self> {
        if linear.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: linear.len(),
            });
        }
        let mut kept: Vec<((usize, usize), Rational)> = Vec::new();
        for ((i, j), a) in pairs {
            if i >= j || j >= n {
                return Err(Error::Coefficient(format!(
                    "pair index ({}, {}) is out of order or range for n = {}",
                    i + 1,
                    j + 1,
                    n
                )));
            }
            if a.is_negative() {
                return Err(Error::Coefficient(format!(
                    "pair coefficient a[{},{}] = {} is negative",
                    i + 1,
                    j + 1,
                    format_rational(&a)
                )));
            }
            if !a.is_zero() {
                kept.push(((i, j), a));
            }
        }
        kept.sort_by_key(|&(ij, _)| ij);
        for w in kept.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Coefficient(format!(
                    "duplicate pair ({}, {})",
                    w[0].0 .0 + 1,
                    w[0].0 .1 + 1
                )));
            }
        }
        let mut denom = BigInt::one();
        for (_, a) in &kept {
            denom = denom.lcm(a.denom());
        }
        for b in &linear {
            denom = denom.lcm(b.denom());
        }
        let scale = |r: &Rational| (r * Rational::from_integer(denom.clone())).to_integer();
        Ok(FitnessFunction {
            n,
            pair_scaled: kept.iter().map(|(_, a)| scale(a)).collect(),
            pairs: kept.into_iter().map(|(ij, _)| ij).collect(),
            linear_scaled: linear.iter().map(scale).collect(),
            denom,
        })
    }

    /// Builds a fitness function whose coefficients are plain integers
    /// (common denominator 1).
    pub fn from_integers(
        n: usize,
        pairs: Vec<((usize, usize), BigInt)>,
        linear: Vec<BigInt>,
    ) -> Result<Self> {
        FitnessFunction::new(
            n,
            pairs
                .into_iter()
                .map(|(ij, a)| (ij, Rational::from_integer(a)))
                .collect(),
            linear.into_iter().map(Rational::from_integer).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero) pair terms.
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    /// Problem size n + m.
    pub fn delta(&self) -> usize {
        self.n + self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Common denominator c (always >= 1).
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Integer coefficient c * a for the k-th stored pair.
    pub fn pair_scaled(&self, k: usize) -> &BigInt {
        &self.pair_scaled[k]
    }

    /// Integer coefficient c * b_i.
    pub fn linear_scaled(&self, i: usize) -> &BigInt {
        &self.linear_scaled[i]
    }

    pub fn pair_coeff(&self, k: usize) -> Rational {
        Rational::new(self.pair_scaled[k].clone(), self.denom.clone())
    }

    pub fn linear_coeff(&self, i: usize) -> Rational {
        Rational::new(self.linear_scaled[i].clone(), self.denom.clone())
    }

    /// Sum of all pair coefficients, exact.
    pub fn sum_pair_coeffs(&self) -> Rational {
        let total: BigInt = self.pair_scaled.iter().sum();
        Rational::new(total, self.denom.clone())
    }

    /// Sum of |b_i|, exact.
    pub fn sum_abs_linear(&self) -> Rational {
        let total: BigInt = self.linear_scaled.iter().map(|b| b.abs()).sum();
        Rational::new(total, self.denom.clone())
    }

    /// c * f(x), exact over integers.
    pub fn evaluate_scaled(&self, x: &HpSequence) -> BigInt {
        self.evaluate_scaled_bits(x.bits())
    }

    pub(crate) fn evaluate_scaled_bits(&self, bits: &[bool]) -> BigInt {
        debug_assert_eq!(bits.len(), self.n);
        let mut total = BigInt::zero();
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if bits[i] && bits[j] {
                total -= &self.pair_scaled[k];
            }
        }
        for (i, &bit) in bits.iter().enumerate() {
            if bit {
                total += &self.linear_scaled[i];
            }
        }
        total
    }

    /// f(x), exact.
    pub fn evaluate(&self, x: &HpSequence) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(Rational::new(self.evaluate_scaled(x), self.denom.clone()))
    }
}

/// Builds the fitness function of a backbone: pair terms -alpha * g(d_ij)
/// for residues with j > i + 2 and positive contact strength, linear terms
/// beta * s_i. Contact strengths are rounded to nine decimals first.
pub fn build_phi_from_geometry(
    geom: &Geometry,
    alpha: &Rational,
    beta: &Rational,
) -> Result<FitnessFunction> {
    if alpha.is_positive() {
        return Err(Error::Parameter(format!(
            "alpha = {} must be nonpositive",
            format_rational(alpha)
        )));
    }
    if beta.is_negative() {
        return Err(Error::Parameter(format!(
            "beta = {} must be nonnegative",
            format_rational(beta)
        )));
    }
    let n = geom.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 3)..n {
            let g = sigmoid_g(geom.distance(i, j))?;
            if g > 0.0 {
                let a = -alpha * rationalize_g(g);
                if !a.is_zero() {
                    pairs.push(((i, j), a));
                }
            }
        }
    }
    let linear = geom
        .residues()
        .iter()
        .map(|r| beta * &r.surface)
        .collect();
    FitnessFunction::new(n, pairs, linear)
}

/// Builds the fitness function with the default parameters alpha = -2,
/// beta = 1/3.
pub fn build_phi_default(geom: &Geometry) -> Result<FitnessFunction> {
    build_phi_from_geometry(geom, &default_alpha(), &default_beta())
}

// ── File formats ────────────────────────────────────────────────────────────

pub(crate) fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_index(tok: &str, n: usize, file: &str, line: usize) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|_| parse_err(file, line, format!("bad index '{}'", tok)))?;
    if i < 1 || i > n {
        return Err(parse_err(
            file,
            line,
            format!("index {} out of range 1..={}", i, n),
        ));
    }
    Ok(i - 1)
}

/// Parses a fitness file: a `phi <n>` header, then `pair <i> <j> <a_ij>` and
/// `lin <i> <b_i>` rows (1-based, '#' comments, omitted coefficients are 0).
pub fn parse_fitness_file(text: &str, file: &str) -> Result<FitnessFunction> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| parse_err(file, 1, "missing 'phi <n>' header"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["phi", n_tok] => n_tok
            .parse()
            .map_err(|_| parse_err(file, ln, format!("bad size '{}'", n_tok)))?,
        _ => return Err(parse_err(file, ln, "expected 'phi <n>' header")),
    };
    let mut pairs: Vec<((usize, usize), Rational)> = Vec::new();
    let mut linear = vec![Rational::zero(); n];
    let mut seen_lin = vec![false; n];
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[..] {
            ["pair", i_tok, j_tok, a_tok] => {
                let i = parse_index(i_tok, n, file, ln)?;
                let j = parse_index(j_tok, n, file, ln)?;
                if i >= j {
                    return Err(parse_err(file, ln, format!("pair needs i < j, got {} {}", i + 1, j + 1)));
                }
                if pairs.iter().any(|&((pi, pj), _)| (pi, pj) == (i, j)) {
                    return Err(parse_err(file, ln, format!("duplicate pair {} {}", i + 1, j + 1)));
                }
                let a = parse_rational(a_tok).map_err(|e| parse_err(file, ln, e.to_string()))?;
                if a.is_negative() {
                    return Err(parse_err(file, ln, format!("pair coefficient {} is negative", a_tok)));
                }
                pairs.push(((i, j), a));
            }
            ["lin", i_tok, b_tok] => {
                let i = parse_index(i_tok, n, file, ln)?;
                if seen_lin[i] {
                    return Err(parse_err(file, ln, format!("duplicate lin {}", i + 1)));
                }
                seen_lin[i] = true;
                linear[i] = parse_rational(b_tok).map_err(|e| parse_err(file, ln, e.to_string()))?;
            }
            _ => return Err(parse_err(file, ln, format!("unrecognized row '{}'", l))),
        }
    }
    FitnessFunction::new(n, pairs, linear)
}

/// Writes a fitness function in the fitness-file format, zero terms omitted.
pub fn write_fitness_file(phi: &FitnessFunction) -> String {
    let mut out = format!("phi\t{}\n", phi.n());
    for (k, &(i, j)) in phi.pairs().iter().enumerate() {
        out.push_str(&format!(
            "pair\t{}\t{}\t{}\n",
            i + 1,
            j + 1,
            format_rational(&phi.pair_coeff(k))
        ));
    }
    for i in 0..phi.n() {
        let b = phi.linear_coeff(i);
        if !b.is_zero() {
            out.push_str(&format!("lin\t{}\t{}\n", i + 1, format_rational(&b)));
        }
    }
    out
}

/// Parses a geometry file: a `geom <n>` header, then one
/// `res <i> <x> <y> <z> <s_i> [<letter>]` row per residue.
pub fn parse_geometry_file(text: &str, file: &str) -> Result<Geometry> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| parse_err(file, 1, "missing 'geom <n>' header"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["geom", n_tok] => n_tok
            .parse()
            .map_err(|_| parse_err(file, ln, format!("bad size '{}'", n_tok)))?,
        _ => return Err(parse_err(file, ln, "expected 'geom <n>' header")),
    };
    let mut slots: Vec<Option<Residue>> = vec![None; n];
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 6 || toks.len() > 7 || toks[0] != "res" {
            return Err(parse_err(file, ln, format!("unrecognized row '{}'", l)));
        }
        let i = parse_index(toks[1], n, file, ln)?;
        if slots[i].is_some() {
            return Err(parse_err(file, ln, format!("duplicate residue {}", i + 1)));
        }
        let coord = |tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(file, ln, format!("bad coordinate '{}'", tok)))
        };
        let surface = parse_rational(toks[5]).map_err(|e| parse_err(file, ln, e.to_string()))?;
        let native = match toks.get(6) {
            Some(t) => {
                let mut chars = t.chars();
                let ch = chars.next().unwrap();
                if chars.next().is_some() || !AMINO_ACIDS.contains(ch.to_ascii_uppercase()) {
                    return Err(parse_err(file, ln, format!("bad amino-acid letter '{}'", t)));
                }
                Some(ch.to_ascii_uppercase())
            }
            None => None,
        };
        slots[i] = Some(Residue {
            pos: [coord(toks[2])?, coord(toks[3])?, coord(toks[4])?],
            surface,
            native,
        });
    }
    let residues: Vec<Residue> = slots
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| parse_err(file, 0, format!("missing residue {}", i + 1))))
        .collect::<Result<_>>()?;
    Geometry::new(residues).map_err(|e| parse_err(file, 0, e.to_string()))
}

/// Parses a weights file of `w <i> <value>` rows; omitted indexes get 0.
pub fn parse_weights_file(text: &str, file: &str, n: usize) -> Result<Vec<Rational>> {
    let mut w = vec![Rational::zero(); n];
    let mut seen = vec![false; n];
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[..] {
            ["w", i_tok, v_tok] => {
                let i = parse_index(i_tok, n, file, ln)?;
                if seen[i] {
                    return Err(parse_err(file, ln, format!("duplicate weight {}", i + 1)));
                }
                seen[i] = true;
                w[i] = parse_rational(v_tok).map_err(|e| parse_err(file, ln, e.to_string()))?;
            }
            _ => return Err(parse_err(file, ln, format!("unrecognized row '{}'", l))),
        }
    }
    Ok(w)
}
