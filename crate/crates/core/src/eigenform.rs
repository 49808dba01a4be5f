//! Newform abstraction: eigenvalue supply (elliptic-curve point counting or
//! Hecke action on a resolved eigen-symbol), optimal-period normalization,
//! and the period integrals that feed every Mazur-Tate element.
//!
//! Sign conventions. The period integral lambda(f, P; a, m) is evaluated as
//! the pairing of P(mz + a) against the symbol value on the path
//! {oo -> -a/m}. With the eigen-symbols scaled to unit content in the
//! binomial-weighted lattice, [a/m]^{+-} = lambda(z^{r-1}; a, m) +-
//! lambda(z^{r-1}; -a, m) is an exact integer. The norm-relation suite pins
//! this convention; see the tests in `mazurtate`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::arith::{content_normalize, jacobi};
use crate::error::{Error, Result};
use crate::modsym::{Cusp, ManinSymbolSpace, P1Table, SymbolModP};

/// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with a user-supplied conductor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub a: [i64; 5],
    pub conductor: u64,
}

impl CurveModel {
    pub fn new(a: [i64; 5], conductor: u64) -> Result<Self> {
        let c = CurveModel { a, conductor };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3
            - &a4 * &a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, ell: u64) -> bool {
        !self.discriminant().mod_floor(&BigInt::from(ell)).is_zero()
    }

    /// Trace of Frobenius a_l. Good primes count points fiberwise over x via
    /// the quadratic character; bad primes count nonsingular points directly.
    pub fn ap(&self, ell: u64) -> Result<i64> {
        if !crate::arith::is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if self.has_good_reduction(ell) {
            Ok(self.ap_good(ell))
        } else {
            self.ap_bad(ell)
        }
    }

    fn ap_good(&self, ell: u64) -> i64 {
        if ell == 2 {
            return 2 + 1 - self.count_points_brute(2) as i64;
        }
        let l = ell as i64;
        let [a1, a2, a3, a4, a6] = self.a.map(|x| x.rem_euclid(l));
        // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let b2 = (a1 * a1 + 4 * a2).rem_euclid(l);
        let b4 = (2 * a4 + a1 * a3).rem_euclid(l);
        let b6 = (a3 * a3 + 4 * a6).rem_euclid(l);
        let mut sum = 0i64;
        for x in 0..l {
            let x2 = x * x % l;
            let g = (4 * x2 % l * x % l + b2 * x2 % l + 2 * b4 * x % l + b6) % l;
            sum += jacobi(g, ell);
        }
        -sum
    }

    fn count_points_brute(&self, ell: u64) -> u64 {
        let l = ell as i64;
        let [a1, a2, a3, a4, a6] = self.a.map(|x| x.rem_euclid(l));
        let mut count = 1; // point at infinity
        for x in 0..l {
            for y in 0..l {
                let lhs = (y * y + a1 * x % l * y + a3 * y).rem_euclid(l);
                let rhs = (x * x % l * x + a2 * x % l * x + a4 * x + a6).rem_euclid(l);
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    fn ap_bad(&self, ell: u64) -> Result<i64> {
        let l = ell as i64;
        let [a1, a2, a3, a4, a6] = self.a.map(|x| x.rem_euclid(l));
        let mut smooth = 1i64; // infinity is always smooth
        for x in 0..l {
            for y in 0..l {
                let f = (y * y + a1 * x % l * y + a3 * y - x * x % l * x - a2 * x % l * x
                    - a4 * x
                    - a6)
                    .rem_euclid(l);
                if f != 0 {
                    continue;
                }
                let fy = (2 * y + a1 * x + a3).rem_euclid(l);
                let fx = (a1 * y - 3 * x % l * x - 2 * a2 * x - a4).rem_euclid(l);
                if fy != 0 || fx != 0 {
                    smooth += 1;
                }
            }
        }
        let ap = l - smooth;
        if ap.abs() > 1 {
            return Err(Error::BadReductionUnsupported(ell));
        }
        Ok(ap)
    }

    /// a_n for n = 1..=cutoff via multiplicativity and the Hecke recurrences.
    pub fn an_list(&self, cutoff: usize) -> Result<Vec<i64>> {
        let mut a = vec![0i64; cutoff + 1];
        if cutoff >= 1 {
            a[1] = 1;
        }
        let mut ell = 2u64;
        while (ell as usize) <= cutoff {
            if crate::arith::is_prime(ell) {
                let ap = self.ap(ell)?;
                let good = self.has_good_reduction(ell);
                // prime powers
                let mut powers = vec![1i64, ap];
                let mut pe = ell as usize * ell as usize;
                while pe <= cutoff {
                    let e = powers.len();
                    let next = if good {
                        ap * powers[e - 1] - ell as i64 * powers[e - 2]
                    } else {
                        ap * powers[e - 1]
                    };
                    powers.push(next);
                    pe *= ell as usize;
                }
                let mut q = ell as usize;
                let mut e = 1;
                while q <= cutoff {
                    a[q] = powers[e];
                    q *= ell as usize;
                    e += 1;
                }
            }
            ell += 1;
        }
        // fill composites multiplicatively
        for n in 2..=cutoff {
            if a[n] != 0 || n < 2 {
                continue;
            }
            let mut m = n;
            let mut p = 2;
            while p * p <= m {
                if m % p == 0 {
                    break;
                }
                p += 1;
            }
            if p * p > m {
                p = m;
            }
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            a[n] = a[q] * a[m];
        }
        Ok(a)
    }
}

/// Where Hecke eigenvalues come from.
#[derive(Debug, Clone)]
pub enum NewformSource {
    Curve(CurveModel),
    SymbolEigenform {
        level: u64,
        weight: u32,
        eigen_bound: u64,
        pins: Vec<(u64, i64)>,
    },
}

impl NewformSource {
    pub fn level(&self) -> u64 {
        match self {
            NewformSource::Curve(c) => c.conductor,
            NewformSource::SymbolEigenform { level, .. } => *level,
        }
    }

    pub fn weight(&self) -> u32 {
        match self {
            NewformSource::Curve(_) => 2,
            NewformSource::SymbolEigenform { weight, .. } => *weight,
        }
    }
}

/// The eigen-symbol pair scaled to optimal periods: every generator moment is
/// an integer and each sign list has content 1 with positive leading entry.
pub struct NormalizedEigenSymbol {
    level: u64,
    weight: u32,
    p1: Arc<P1Table>,
    plus: Vec<BigInt>,
    minus: Vec<BigInt>,
    scale_plus: BigRational,
    scale_minus: BigRational,
    fingerprint: String,
    cache: Mutex<HashMap<(i64, i64, u32), BigInt>>,
}

impl NormalizedEigenSymbol {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn p1(&self) -> &Arc<P1Table> {
        &self.p1
    }

    pub fn values(&self, sign: i8) -> &[BigInt] {
        if sign >= 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    pub fn applied_scale(&self, sign: i8) -> &BigRational {
        if sign >= 0 {
            &self.scale_plus
        } else {
            &self.scale_minus
        }
    }

    /// Hash of the normalized data; certificates carry it so that values can
    /// be replayed against the same normalization.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn width(&self) -> usize {
        (self.weight - 1) as usize
    }

    /// Moments of one sign part on the path {oo -> cusp}.
    pub fn eval_to_cusp(&self, sign: i8, cusp: Cusp) -> Vec<BigInt> {
        let vals = self.values(sign);
        eval_moments_int(&self.p1, self.weight, vals, cusp)
    }

    /// lambda(f, P; a, m) normalized by the optimal periods: the pairing of
    /// P(mz + a) against both sign parts at the cusp -a/m.
    pub fn period_lambda(&self, poly: &[BigRational], a: i64, m: i64) -> Result<BigRational> {
        if m <= 0 {
            return Err(Error::BadModulus(m.unsigned_abs(), 0));
        }
        let deg = self.weight as usize - 2;
        if poly.len() > deg + 1 {
            return Err(Error::DegreeTooLarge(poly.len() - 1, deg));
        }
        let q = substitute_linear(poly, m, a, self.width());
        let cusp = Cusp::new(-a, m);
        let vp = self.eval_to_cusp(1, cusp);
        let vm = self.eval_to_cusp(-1, cusp);
        let mut acc = BigRational::zero();
        for (j, qj) in q.iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            acc += qj * BigRational::from(&vp[j] + &vm[j]);
        }
        Ok(acc)
    }

    /// The signed period integral [a/m]^{sign}_{f,r}; exact integer.
    pub fn period_integral(&self, r: u32, a: i64, m: i64, sign: i8) -> Result<BigInt> {
        if r < 1 || r > self.weight - 1 {
            return Err(Error::DegreeTooLarge(r as usize, self.weight as usize - 2));
        }
        let la = self.lambda_monomial(r, a, m)?;
        let lb = self.lambda_monomial(r, -a, m)?;
        let v = if sign >= 0 { &la + &lb } else { &la - &lb };
        Ok(v)
    }

    /// The full period integral [a/m]_{f,r} = [a/m]^+ + [a/m]^-.
    pub fn period_integral_unsigned(&self, r: u32, a: i64, m: i64) -> Result<BigInt> {
        if r < 1 || r > self.weight - 1 {
            return Err(Error::DegreeTooLarge(r as usize, self.weight as usize - 2));
        }
        Ok(self.lambda_monomial(r, a, m)? * 2)
    }

    /// Integer value of lambda(f, z^{r-1}; a, m) against both sign parts.
    /// Cached keyed by (a mod m, m, r); dependence on a only through a mod m
    /// is the periodicity of period integrals, verified uncached in tests.
    fn lambda_monomial(&self, r: u32, a: i64, m: i64) -> Result<BigInt> {
        let key = (a.rem_euclid(m), m, r);
        if let Some(v) = self.cache.lock().expect("period cache").get(&key) {
            return Ok(v.clone());
        }
        let mut poly = vec![BigRational::zero(); r as usize];
        poly[r as usize - 1] = BigRational::one();
        let v = self.period_lambda(&poly, a, m)?;
        debug_assert!(v.denom().is_one(), "optimal normalization keeps integrality");
        let out = v.numer().clone();
        self.cache
            .lock()
            .expect("period cache")
            .insert(key, out.clone());
        Ok(out)
    }

    /// Mod-p view of one sign part for fast sweeps.
    pub fn mod_p_view(&self, sign: i8, p: u64) -> SymbolModP {
        SymbolModP::new(self.p1.clone(), self.weight, self.values(sign), p)
    }
}

/// Coefficients of P(m z + a) in the monomial basis, padded to `width`.
fn substitute_linear(poly: &[BigRational], m: i64, a: i64, width: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); width];
    let mb = BigInt::from(m);
    let ab = BigInt::from(a);
    for (i, p) in poly.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        // (m z + a)^i = sum_j binom(i, j) m^j a^{i-j} z^j
        let mut binom = BigInt::one();
        for j in 0..=i {
            let term = &binom * mb.pow(j as u32) * ab.pow((i - j) as u32);
            out[j] += p * BigRational::from(term);
            if j < i {
                binom = binom * BigInt::from((i - j) as u64) / BigInt::from((j + 1) as u64);
            }
        }
    }
    out
}

fn eval_moments_int(p1: &P1Table, weight: u32, values: &[BigInt], cusp: Cusp) -> Vec<BigInt> {
    crate::modsym::eval_path_from_infinity_int(p1, weight, values, cusp)
}

/// A fully resolved newform: the symbol space, the normalized eigen-symbol,
/// and the eigenvalue source.
pub struct ResolvedForm {
    pub source: NewformSource,
    pub space: ManinSymbolSpace,
    pub nes: NormalizedEigenSymbol,
}

impl ResolvedForm {
    /// Hecke eigenvalue a_l: point counting for curve models, Hecke action on
    /// the eigen-symbol otherwise.
    pub fn eigenvalue(&self, ell: u64) -> Result<i64> {
        match &self.source {
            NewformSource::Curve(c) => c.ap(ell),
            NewformSource::SymbolEigenform { .. } => self.eigenvalue_from_symbol(ell),
        }
    }

    pub fn eigenvalue_from_symbol(&self, ell: u64) -> Result<i64> {
        let img = self.space.apply_hecke_to_values(&self.nes.plus, ell);
        let ratio = crate::linalg::proportionality_ratio(&self.nes.plus, &img)
            .ok_or(Error::NonRational)?;
        if !ratio.denom().is_one() {
            return Err(Error::NonRational);
        }
        ratio.numer().to_i64().ok_or(Error::NonRational)
    }

    pub fn level(&self) -> u64 {
        self.source.level()
    }

    pub fn weight(&self) -> u32 {
        self.source.weight()
    }
}

/// Build the symbol space for a source, resolve both sign eigen-symbols, and
/// normalize them to optimal-period scale.
pub fn resolve(source: &NewformSource) -> Result<ResolvedForm> {
    resolve_with_limit(source, crate::modsym::DEFAULT_SPACE_LIMIT)
}

pub fn resolve_with_limit(source: &NewformSource, limit: u64) -> Result<ResolvedForm> {
    let level = source.level();
    let weight = source.weight();
    let space = ManinSymbolSpace::build_with_limit(level, weight, limit)?;
    let pins = eigen_pins(source, &space)?;
    let nes = optimal_normalize(&space, &pins)?;
    let form = ResolvedForm { source: source.clone(), space, nes };
    if let NewformSource::Curve(c) = source {
        // conductor/model spot check: three further good primes must agree
        // between point counting and the Hecke action on the symbol
        let mut checked = 0;
        let mut ell = 2u64;
        while checked < 3 {
            if crate::arith::is_prime(ell)
                && level % ell != 0
                && !pins.iter().any(|&(l, _)| l == ell)
            {
                let counted = c.ap(ell)?;
                let acted = form.eigenvalue_from_symbol(ell)?;
                if counted != acted {
                    return Err(Error::InconsistentModel(format!(
                        "a_{ell} from point counting is {counted}, symbol gives {acted}; \
                         wrong conductor or model"
                    )));
                }
                checked += 1;
            }
            ell += 1;
        }
    }
    Ok(form)
}

/// Eigenvalue pins used to cut out the one-dimensional eigenspace per sign.
fn eigen_pins(source: &NewformSource, space: &ManinSymbolSpace) -> Result<Vec<(u64, i64)>> {
    let level = source.level();
    match source {
        NewformSource::Curve(c) => {
            let mut pins = Vec::new();
            let mut ell = 2u64;
            // a handful of good primes is enough once the eigenspace is 1-dim;
            // grow the list on ambiguity up to the default bound
            while pins.len() < 3 {
                if crate::arith::is_prime(ell) && level % ell != 0 {
                    pins.push((ell, c.ap(ell)?));
                }
                ell += 1;
            }
            loop {
                match space.cuspidal_eigen_symbol(&pins, 1) {
                    Ok(_) => return Ok(pins),
                    Err(Error::AmbiguousEigensystem(d)) if d > 1 && ell <= 100 => {
                        while !crate::arith::is_prime(ell) || level % ell == 0 {
                            ell += 1;
                        }
                        pins.push((ell, c.ap(ell)?));
                        ell += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        NewformSource::SymbolEigenform { pins, eigen_bound, .. } => {
            let _ = eigen_bound;
            Ok(pins.clone())
        }
    }
}

/// Scale both sign eigen-symbols so all generator moments are integers of
/// content 1 in the binomial-weighted lattice basis.
pub fn optimal_normalize(
    space: &ManinSymbolSpace,
    eigenvalues: &[(u64, i64)],
) -> Result<NormalizedEigenSymbol> {
    let plus_vec = space.cuspidal_eigen_symbol(eigenvalues, 1)?;
    let minus_vec = space.cuspidal_eigen_symbol(eigenvalues, -1)?;
    let plus_raw = space.generator_values(&plus_vec);
    let minus_raw = space.generator_values(&minus_vec);
    let (plus, scale_plus) = content_normalize(&plus_raw)?;
    let (minus, scale_minus) = content_normalize(&minus_raw)?;
    let mut hasher = Sha256::new();
    hasher.update(format!("N={} k={}\n", space.level(), space.weight()).as_bytes());
    for v in plus.iter() {
        hasher.update(format!("+{v},").as_bytes());
    }
    for v in minus.iter() {
        hasher.update(format!("-{v},").as_bytes());
    }
    let fingerprint = hex_digest(hasher);
    Ok(NormalizedEigenSymbol {
        level: space.level(),
        weight: space.weight(),
        p1: space.p1().clone(),
        plus,
        minus,
        scale_plus,
        scale_minus,
        fingerprint,
        cache: Mutex::new(HashMap::new()),
    })
}

fn hex_digest(hasher: Sha256) -> String {
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// The standard test battery curves.
pub fn curve_11a() -> CurveModel {
    CurveModel::new([0, -1, 1, -10, -20], 11).expect("11a is nonsingular")
}

pub fn curve_37a() -> CurveModel {
    CurveModel::new([0, 0, 1, -1, 0], 37).expect("37a is nonsingular")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts_11a() {
        let c = curve_11a();
        assert_eq!(c.ap(2).unwrap(), -2);
        assert_eq!(c.ap(3).unwrap(), -1);
        assert_eq!(c.ap(5).unwrap(), 1);
        assert_eq!(c.ap(7).unwrap(), -2);
        assert_eq!(c.ap(13).unwrap(), 4);
        // bad prime: split multiplicative at 11
        assert_eq!(c.ap(11).unwrap(), 1);
    }

    #[test]
    fn point_counts_37a() {
        let c = curve_37a();
        assert_eq!(c.ap(2).unwrap(), -2);
        assert_eq!(c.ap(3).unwrap(), -3);
        assert_eq!(c.ap(5).unwrap(), -2);
        assert_eq!(c.ap(37).unwrap(), -1);
    }

    #[test]
    fn char_sum_matches_brute_force() {
        let c = curve_11a();
        for ell in [3u64, 5, 7, 13, 17] {
            let brute = ell as i64 + 1 - c.count_points_brute(ell) as i64;
            assert_eq!(c.ap(ell).unwrap(), brute, "l = {ell}");
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(curve_11a().discriminant(), BigInt::from(-161051)); // -11^5
        assert_eq!(curve_37a().discriminant(), BigInt::from(37));
        assert!(CurveModel::new([0, 0, 0, 0, 0], 1).is_err());
    }

    #[test]
    fn an_list_multiplicative() {
        let c = curve_11a();
        let a = c.an_list(30).unwrap();
        assert_eq!(a[1], 1);
        assert_eq!(a[2], -2);
        assert_eq!(a[6], a[2] * a[3]);
        assert_eq!(a[4], a[2] * a[2] - 2); // a_{p^2} = a_p^2 - p
        assert_eq!(a[22], a[2] * a[11]);
    }

    #[test]
    fn resolve_11a_and_check_eigenvalues() {
        let c = curve_11a();
        let form = resolve(&NewformSource::Curve(c.clone())).unwrap();
        for ell in [2u64, 3, 5, 7, 13, 17, 19] {
            assert_eq!(
                form.eigenvalue_from_symbol(ell).unwrap(),
                c.ap(ell).unwrap(),
                "a_{ell}"
            );
        }
    }

    #[test]
    fn normalization_kills_scalars() {
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        // both sign parts have content 1
        let mut g = BigInt::zero();
        for v in form.nes.values(1) {
            g = g.gcd(v);
        }
        assert!(g.is_one());
        let mut g = BigInt::zero();
        for v in form.nes.values(-1) {
            g = g.gcd(v);
        }
        assert!(g.is_one());
        // renormalizing a rescaled copy gives back the same data
        let scaled: Vec<BigRational> = form
            .nes
            .values(1)
            .iter()
            .map(|v| {
                BigRational::new(BigInt::from(7), BigInt::from(3)) * BigRational::from(v.clone())
            })
            .collect();
        let (w, _) = content_normalize(&scaled).unwrap();
        assert_eq!(&w, form.nes.values(1));
    }

    #[test]
    fn period_zero_one_values() {
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        // rank zero: [0/1]^+ is nonzero, [0/1]^- vanishes identically
        let plus = form.nes.period_integral(1, 0, 1, 1).unwrap();
        let minus = form.nes.period_integral(1, 0, 1, -1).unwrap();
        assert!(!plus.is_zero());
        assert!(minus.is_zero());

        let form37 = resolve(&NewformSource::Curve(curve_37a())).unwrap();
        // rank one: [0/1]^+ vanishes exactly
        let plus = form37.nes.period_integral(1, 0, 1, 1).unwrap();
        assert!(plus.is_zero());
    }

    #[test]
    fn period_symmetries() {
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        let poly = vec![BigRational::one()];
        for (a, m) in [(1i64, 7i64), (2, 7), (3, 13), (5, 9)] {
            // periodicity through the uncached pairing: different cusps,
            // identical values
            let p = form.nes.period_lambda(&poly, a, m).unwrap();
            let p_shift = form.nes.period_lambda(&poly, a + m, m).unwrap();
            let p_shift2 = form.nes.period_lambda(&poly, a - 3 * m, m).unwrap();
            assert_eq!(p, p_shift, "periodicity in a");
            assert_eq!(p, p_shift2);
            let p_neg = form.nes.period_integral(1, -a, m, 1).unwrap();
            assert_eq!(form.nes.period_integral(1, a, m, 1).unwrap(), p_neg);
            let q = form.nes.period_integral(1, a, m, -1).unwrap();
            let q_neg = form.nes.period_integral(1, -a, m, -1).unwrap();
            assert_eq!(q, -q_neg.clone(), "[-a/m]^- = -[a/m]^-");
        }
    }

    #[test]
    fn periodicity_higher_weight() {
        let src = NewformSource::SymbolEigenform {
            level: 1,
            weight: 12,
            eigen_bound: 100,
            pins: vec![(2, -24)],
        };
        let form = resolve(&src).unwrap();
        for r in [1usize, 6, 11] {
            let mut poly = vec![BigRational::zero(); r];
            poly[r - 1] = BigRational::one();
            let a = 2i64;
            let m = 7i64;
            let p = form.nes.period_lambda(&poly, a, m).unwrap();
            let p_shift = form.nes.period_lambda(&poly, a + m, m).unwrap();
            assert_eq!(p, p_shift, "r = {r}");
        }
    }

    #[test]
    fn lambda_scaling_identity() {
        // lambda(P(z); a, m) = lambda(P(z/t); ta, tm)
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        let poly = vec![BigRational::one()]; // P = 1, k = 2
        let lhs = form.nes.period_lambda(&poly, 2, 7).unwrap();
        let rhs = form.nes.period_lambda(&poly, 4, 14).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sign_decomposition() {
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        for (a, m) in [(1i64, 7i64), (3, 11 * 2 + 1), (4, 9)] {
            let plus = form.nes.period_integral(1, a, m, 1).unwrap();
            let minus = form.nes.period_integral(1, a, m, -1).unwrap();
            let poly = vec![BigRational::one()];
            let lam = form.nes.period_lambda(&poly, a, m).unwrap();
            assert_eq!(
                BigRational::from(&plus + &minus),
                lam * BigRational::from(BigInt::from(2)),
                "[a/m]^+ + [a/m]^- = 2 lambda"
            );
            let unsigned = form.nes.period_integral_unsigned(1, a, m).unwrap();
            assert_eq!(unsigned, plus + minus);
        }
    }

    #[test]
    fn degree_guard() {
        let form = resolve(&NewformSource::Curve(curve_11a())).unwrap();
        assert!(matches!(
            form.nes.period_integral(2, 0, 1, 1),
            Err(Error::DegreeTooLarge(_, _))
        ));
        let poly = vec![BigRational::one(), BigRational::one()];
        assert!(matches!(
            form.nes.period_lambda(&poly, 0, 1),
            Err(Error::DegreeTooLarge(_, _))
        ));
    }

    #[test]
    fn weight_twelve_normalization() {
        let src = NewformSource::SymbolEigenform {
            level: 1,
            weight: 12,
            eigen_bound: 100,
            pins: vec![(2, -24)],
        };
        let form = resolve(&src).unwrap();
        // tau values: tau(3) = 252, tau(5) = 4830, tau(7) = -16744
        assert_eq!(form.eigenvalue(3).unwrap(), 252);
        assert_eq!(form.eigenvalue(5).unwrap(), 4830);
        assert_eq!(form.eigenvalue(7).unwrap(), -16744);
        let mut g = BigInt::zero();
        for v in form.nes.values(1) {
            g = g.gcd(v);
        }
        assert!(g.is_one());
    }

    #[test]
    fn divisibility_of_shifted_monomial() {
        // lambda((z - a)^{r-1}; a, m) is divisible by m^{r-1}
        let src = NewformSource::SymbolEigenform {
            level: 1,
            weight: 12,
            eigen_bound: 100,
            pins: vec![(2, -24)],
        };
        let form = resolve(&src).unwrap();
        let r = 4usize;
        let a = 2i64;
        let m = 5i64;
        // (z - a)^{r-1} expanded in the monomial basis
        let mut poly = vec![BigRational::zero(); r];
        let mut binom = BigInt::one();
        for j in 0..r {
            let c = &binom * BigInt::from(-a).pow((r - 1 - j) as u32);
            poly[j] = BigRational::from(c);
            if j < r - 1 {
                binom = binom * BigInt::from((r - 1 - j) as u64) / BigInt::from((j + 1) as u64);
            }
        }
        let v = form.nes.period_lambda(&poly, a, m).unwrap();
        assert!(v.denom().is_one());
        let quotient = v.numer() / BigInt::from(m).pow((r - 1) as u32);
        assert_eq!(
            v.numer(),
            &(quotient * BigInt::from(m).pow((r - 1) as u32))
        );
    }
}
