//! Exact Manin-symbol engine for Gamma_0(N) and weight k >= 2.
//!
//! A symbol is stored through its values on the Manin generator set: for each
//! (c:d) in P^1(Z/N) a moment vector (m_0, ..., m_{k-2}), where m_j stands for
//! the coefficient of the weighted monomial binom(k-2,j) X^j Y^{k-2-j} in the
//! value of the symbol on the unimodular path attached to (c:d). The space of
//! symbols is the kernel of the two- and three-term Manin relations written in
//! these coordinates; Hecke operators act through Heilbronn-Merel matrices,
//! and evaluation on an arbitrary path goes through continued-fraction
//! convergents.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;

/// Default guard on N * k for space construction.
pub const DEFAULT_SPACE_LIMIT: u64 = 4096;

/// A cusp a/c in lowest terms, with c >= 0 and infinity = 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub fn infinity() -> Self {
        Cusp { num: 1, den: 0 }
    }

    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return Self::infinity();
        }
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.unsigned_abs().gcd(&d.unsigned_abs()) as i64;
        if g > 1 {
            n /= g;
            d /= g;
        }
        Cusp { num: n, den: d }
    }

    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }
}

impl std::fmt::Display for Cusp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// P^1(Z/N) with canonical representatives and O(1) lookup.
#[derive(Debug)]
pub struct P1Table {
    n: u64,
    reps: Vec<(u64, u64)>,
    lookup: Vec<u32>,
}

impl P1Table {
    pub fn build(n: u64) -> Self {
        if n == 1 {
            return P1Table { n, reps: vec![(0, 0)], lookup: vec![0] };
        }
        let nn = n as usize;
        let units: Vec<u64> = (1..n).filter(|&u| u.gcd(&n) == 1).collect();
        let mut lookup = vec![u32::MAX; nn * nn];
        let mut reps = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                if lookup[(c * n + d) as usize] != u32::MAX {
                    continue;
                }
                let idx = reps.len() as u32;
                reps.push((c, d));
                for &u in &units {
                    let cc = c * u % n;
                    let dd = d * u % n;
                    lookup[(cc * n + dd) as usize] = idx;
                }
            }
        }
        P1Table { n, reps, lookup }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, idx: usize) -> (u64, u64) {
        self.reps[idx]
    }

    /// Index of the class of (c : d); None if gcd(c, d, N) > 1.
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        if self.n == 1 {
            return Some(0);
        }
        let n = self.n as i64;
        let cc = c.rem_euclid(n) as u64;
        let dd = d.rem_euclid(n) as u64;
        let v = self.lookup[(cc * self.n + dd) as usize];
        if v == u32::MAX {
            None
        } else {
            Some(v as usize)
        }
    }

    /// Right action of an integer matrix on the class index.
    pub fn act(&self, idx: usize, m: &[i64; 4]) -> Option<usize> {
        if self.n == 1 {
            return Some(0);
        }
        let n = self.n as i64;
        let (c, d) = self.reps[idx];
        let (c, d) = (c as i64, d as i64);
        let nc = (c * m[0] + d * m[2]).rem_euclid(n);
        let nd = (c * m[1] + d * m[3]).rem_euclid(n);
        self.index_of(nc, nd)
    }
}

/// Lift a P^1 class (c:d) to a matrix [a,b;c',d'] in SL_2(Z) whose bottom row
/// is congruent to (c, d) mod N.
fn lift_to_sl2(c: u64, d: u64, n: u64) -> [i64; 4] {
    if n == 1 {
        return [1, 0, 0, 1];
    }
    let ni = n as i64;
    let cc = (c % n) as i64;
    let dd0 = (d % n) as i64;
    if cc == 0 {
        // class of (0 : d) with gcd(d, N) = 1 equals (0 : 1)
        return [1, 0, 0, 1];
    }
    // pick d' = d + tN coprime to c; exists since gcd(c, d, N) = 1
    let mut dd = dd0;
    let mut t = 0i64;
    while cc.unsigned_abs().gcd(&dd.unsigned_abs()) != 1 {
        t = if t >= 0 { -(t + 1) } else { -t };
        dd = dd0 + t * ni;
    }
    // extended gcd: a*dd - b*cc = 1
    let (g, x, y) = ext_gcd(dd, cc);
    debug_assert_eq!(g.abs(), 1);
    // dd*x + cc*y = g
    let (a, b) = if g == 1 { (x, -y) } else { (-x, y) };
    debug_assert_eq!(a * dd - b * cc, 1);
    [a, b, cc, dd]
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Matrix of the moment-vector action attached to an integer matrix
/// delta = [a,b;c,d]: row i lists the coefficients of
/// (d X - b Y)^i (-c X + a Y)^{k-2-i} on the monomials X^j Y^{k-2-j}.
pub fn moment_matrix(delta: &[i64; 4], k: u32) -> Vec<Vec<BigInt>> {
    let deg = (k - 2) as usize;
    let [a, b, c, d] = *delta;
    let mut rows = Vec::with_capacity(deg + 1);
    for i in 0..=deg {
        // (d X - b Y)^i
        let p1 = binomial_expand(BigInt::from(d), BigInt::from(-b), i);
        // (-c X + a Y)^{deg - i}
        let p2 = binomial_expand(BigInt::from(-c), BigInt::from(a), deg - i);
        // multiply: coefficient of X^j Y^{deg-j}
        let mut row = vec![BigInt::zero(); deg + 1];
        for (j1, c1) in p1.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j2, c2) in p2.iter().enumerate() {
                row[j1 + j2] += c1 * c2;
            }
        }
        rows.push(row);
    }
    rows
}

/// Coefficients of (u X + v Y)^n on X^j Y^{n-j}, j = 0..n.
fn binomial_expand(u: BigInt, v: BigInt, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    // binom(n, j) u^j v^{n-j}
    let mut binom = BigInt::one();
    for (j, slot) in out.iter_mut().enumerate() {
        let term = &binom * u.pow(j as u32) * v.pow((n - j) as u32);
        *slot = term;
        if j < n {
            binom = binom * BigInt::from((n - j) as i64) / BigInt::from((j + 1) as i64);
        }
    }
    out
}

fn adjugate(m: &[i64; 4]) -> [i64; 4] {
    [m[3], -m[1], -m[2], m[0]]
}

fn mat_mul_i64(a: &[i64; 4], b: &[i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

const SIGMA: [i64; 4] = [0, -1, 1, 0];
const TAU: [i64; 4] = [0, -1, 1, -1];

/// Heilbronn-Merel matrices for T_l at a prime l: all integer matrices of
/// determinant l with a > b >= 0 and d > c >= 0.
pub fn heilbronn_merel(ell: u64) -> Vec<[i64; 4]> {
    let l = ell as i64;
    let mut out = Vec::new();
    for a in 1..=l {
        for b in 0..a {
            let mut c = 0i64;
            while c * (a - b) < l {
                let num = l + b * c;
                if num % a == 0 {
                    let d = num / a;
                    if d > c {
                        out.push([a, b, c, d]);
                    }
                }
                c += 1;
            }
        }
    }
    out
}

/// The full modular-symbol space for Gamma_0(N) in weight k.
pub struct ManinSymbolSpace {
    level: u64,
    weight: u32,
    p1: Arc<P1Table>,
    lifts: Vec<[i64; 4]>,
    ngens: usize,
    /// Basis of the solution space (rows of length ngens, primitive integer).
    basis: Vec<Vec<BigInt>>,
    relation_rows: Vec<Vec<BigInt>>,
    cusp_reps: Vec<Cusp>,
    /// Boundary functionals per cusp class, as rows in generator coordinates.
    boundary_rows: Vec<Vec<BigInt>>,
    boundary_rank: usize,
    cuspidal_dim: usize,
    /// Cuspidal subspace in basis coordinates (rows, rational).
    cuspidal_coords: Vec<Vec<BigRational>>,
    /// Eisenstein (boundary) subspace in basis coordinates.
    eisenstein_coords: Vec<Vec<BigRational>>,
}

/// A symbol written in the basis of the ambient solution space.
#[derive(Debug, Clone)]
pub struct SymbolVector {
    pub coords: Vec<BigRational>,
}

impl ManinSymbolSpace {
    pub fn build(level: u64, weight: u32) -> Result<Self> {
        Self::build_with_limit(level, weight, DEFAULT_SPACE_LIMIT)
    }

    pub fn build_with_limit(level: u64, weight: u32, limit: u64) -> Result<Self> {
        if level == 0 || weight < 2 {
            return Err(Error::ResourceLimit(format!(
                "invalid space parameters N={level}, k={weight}"
            )));
        }
        if level * weight as u64 > limit {
            return Err(Error::ResourceLimit(format!(
                "N*k = {} exceeds limit {limit}",
                level * weight as u64
            )));
        }
        let p1 = Arc::new(P1Table::build(level));
        let deg = (weight - 2) as usize;
        let width = deg + 1;
        let ngens = p1.len() * width;
        let lifts: Vec<[i64; 4]> = (0..p1.len())
            .map(|i| {
                let (c, d) = p1.rep(i);
                lift_to_sl2(c, d, level)
            })
            .collect();

        // Relation rows: for every generator class x,
        //   C(x) + A_{sigma^{-1}} C(x sigma) = 0
        //   C(x) + A_{tau^{-1}} C(x tau) + A_{tau^{-2}} C(x tau^2) = 0
        // and for odd k the central relation kills everything.
        let sigma_inv = adjugate(&SIGMA);
        let tau_sq = mat_mul_i64(&TAU, &TAU);
        let tau_inv = tau_sq; // tau^3 = 1
        let tau_inv_sq = TAU;
        let m_sigma = moment_matrix(&sigma_inv, weight);
        let m_tau1 = moment_matrix(&tau_inv, weight);
        let m_tau2 = moment_matrix(&tau_inv_sq, weight);

        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for x in 0..p1.len() {
            let xs = p1.act(x, &SIGMA).expect("sigma is invertible mod N");
            let xt = p1.act(x, &TAU).expect("tau is invertible mod N");
            let xt2 = p1.act(xt, &TAU).expect("tau is invertible mod N");
            for i in 0..width {
                let mut row = vec![BigInt::zero(); ngens];
                row[x * width + i] += 1;
                for j in 0..width {
                    row[xs * width + j] += &m_sigma[i][j];
                }
                rows.push(row);

                let mut row = vec![BigInt::zero(); ngens];
                row[x * width + i] += 1;
                for j in 0..width {
                    row[xt * width + j] += &m_tau1[i][j];
                    row[xt2 * width + j] += &m_tau2[i][j];
                }
                rows.push(row);
            }
            if weight % 2 == 1 {
                for i in 0..width {
                    let mut row = vec![BigInt::zero(); ngens];
                    row[x * width + i] += 2;
                    rows.push(row);
                }
            }
        }

        let basis = linalg::kernel(&rows, ngens)?;

        // Cusp classes from the endpoints of the generator paths.
        let mut cusp_reps: Vec<Cusp> = Vec::new();
        let cusp_of = |cusp: Cusp, reps: &mut Vec<Cusp>| -> usize {
            for (i, r) in reps.iter().enumerate() {
                if cusps_equivalent(*r, cusp, level) {
                    return i;
                }
            }
            reps.push(cusp);
            reps.len() - 1
        };
        let mut gen_cusps: Vec<(usize, usize)> = Vec::with_capacity(p1.len());
        for g in &lifts {
            let c_inf = Cusp::new(g[0], g[2]);
            let c_zero = Cusp::new(g[1], g[3]);
            let ci = cusp_of(c_inf, &mut cusp_reps);
            let cz = cusp_of(c_zero, &mut cusp_reps);
            gen_cusps.push((ci, cz));
        }

        // Boundary map: generator (x, i) hits +[g oo] for i = k-2 and -[g 0]
        // for i = 0 (both when k = 2).
        let mut boundary_rows = vec![vec![BigInt::zero(); ngens]; cusp_reps.len()];
        for (x, &(ci, cz)) in gen_cusps.iter().enumerate() {
            boundary_rows[ci][x * width + deg] += 1;
            boundary_rows[cz][x * width] -= 1;
        }
        let boundary_rank = linalg::rank(&boundary_rows, ngens);

        // Express the boundary functionals in basis coordinates; they span the
        // Eisenstein part of the space.
        let mut eisenstein_coords = Vec::new();
        for row in &boundary_rows {
            if let Some(coords) = coords_in_basis(&basis, row) {
                eisenstein_coords.push(coords);
            } else {
                return Err(Error::ResourceLimit(
                    "boundary functional does not satisfy the Manin relations".into(),
                ));
            }
        }
        let eisenstein_coords = reduce_rational_rows(&eisenstein_coords, basis.len());
        let cuspidal_dim = basis.len() - eisenstein_coords.len();

        let mut space = ManinSymbolSpace {
            level,
            weight,
            p1,
            lifts,
            ngens,
            basis,
            relation_rows: rows,
            cusp_reps,
            boundary_rows,
            boundary_rank,
            cuspidal_dim,
            cuspidal_coords: Vec::new(),
            eisenstein_coords,
        };
        space.cuspidal_coords = space.compute_cuspidal_subspace()?;
        Ok(space)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn p1(&self) -> &Arc<P1Table> {
        &self.p1
    }

    /// Dimension of the full solution space (cuspidal plus Eisenstein).
    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal_dim
    }

    pub fn eisenstein_dim(&self) -> usize {
        self.eisenstein_coords.len()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    pub fn cusp_classes(&self) -> &[Cusp] {
        &self.cusp_reps
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn basis_rows(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn relation_rows(&self) -> &[Vec<BigInt>] {
        &self.relation_rows
    }

    pub fn boundary_rows(&self) -> &[Vec<BigInt>] {
        &self.boundary_rows
    }

    fn width(&self) -> usize {
        (self.weight - 1) as usize
    }

    /// Apply the transpose Hecke operator at a prime to a generator-value row.
    fn apply_hecke_prime_row(&self, row: &[BigInt], ell: u64) -> Vec<BigInt> {
        let width = self.width();
        let heil = heilbronn_merel(ell);
        let acts: Vec<(usize, Vec<Vec<BigInt>>, [i64; 4])> = heil
            .iter()
            .map(|h| (0usize, moment_matrix(&adjugate(h), self.weight), *h))
            .collect();
        let mut out = vec![BigInt::zero(); self.ngens];
        for x in 0..self.p1.len() {
            for (_, mat, h) in &acts {
                if let Some(xh) = self.p1.act(x, h) {
                    let src = &row[xh * width..(xh + 1) * width];
                    for i in 0..width {
                        if mat[i].iter().all(|c| c.is_zero()) {
                            continue;
                        }
                        let mut acc = BigInt::zero();
                        for (j, mij) in mat[i].iter().enumerate() {
                            if !mij.is_zero() && !src[j].is_zero() {
                                acc += mij * &src[j];
                            }
                        }
                        if !acc.is_zero() {
                            out[x * width + i] += acc;
                        }
                    }
                }
            }
        }
        out
    }

    /// Transpose Hecke action at a prime on raw generator values.
    pub fn apply_hecke_to_values(&self, values: &[BigInt], ell: u64) -> Vec<BigInt> {
        debug_assert!(crate::arith::is_prime(ell));
        self.apply_hecke_prime_row(values, ell)
    }

    /// Matrix of T_n on the ambient basis (columns act on coordinates).
    pub fn hecke_matrix_ambient(&self, n: u64) -> Result<Vec<Vec<BigRational>>> {
        if n == 0 {
            return Err(Error::ResourceLimit("T_0 undefined".into()));
        }
        let d = self.basis.len();
        if n == 1 {
            let mut id = vec![vec![BigRational::zero(); d]; d];
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = BigRational::one();
            }
            return Ok(id);
        }
        let facs = crate::arith::factor(n);
        if facs.len() > 1 {
            // multiplicative in coprime parts
            let mut acc: Option<Vec<Vec<BigRational>>> = None;
            for (p, e) in facs {
                let m = self.hecke_matrix_ambient(p.pow(e))?;
                acc = Some(match acc {
                    None => m,
                    Some(a) => linalg::mat_mul_rat(&a, &m),
                });
            }
            return Ok(acc.unwrap());
        }
        let (p, e) = facs[0];
        let tp = self.hecke_prime_matrix_ambient(p)?;
        if e == 1 {
            return Ok(tp);
        }
        if self.level % p == 0 {
            // U_p^e
            let mut acc = tp.clone();
            for _ in 1..e {
                acc = linalg::mat_mul_rat(&tp, &acc);
            }
            return Ok(acc);
        }
        // T_{p^e} = T_p T_{p^{e-1}} - p^{k-1} T_{p^{e-2}}
        let mut prev2 = self.hecke_matrix_ambient(1)?;
        let mut prev1 = tp.clone();
        let scale = BigRational::from(BigInt::from(p).pow(self.weight - 1));
        for _ in 2..=e {
            let mut next = linalg::mat_mul_rat(&tp, &prev1);
            for (i, row) in next.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry -= &scale * &prev2[i][j];
                }
            }
            prev2 = prev1;
            prev1 = next;
        }
        Ok(prev1)
    }

    fn hecke_prime_matrix_ambient(&self, ell: u64) -> Result<Vec<Vec<BigRational>>> {
        let d = self.basis.len();
        let mut cols = Vec::with_capacity(d);
        for b in &self.basis {
            let image = self.apply_hecke_prime_row(b, ell);
            let coords = coords_in_basis(&self.basis, &image).ok_or_else(|| {
                Error::ResourceLimit(format!("T_{ell} does not preserve the symbol space"))
            })?;
            cols.push(coords);
        }
        // cols[j] = coords of T(b_j); matrix entry (i, j)
        let mut mat = vec![vec![BigRational::zero(); d]; d];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                mat[i][j] = v.clone();
            }
        }
        Ok(mat)
    }

    /// Star involution on a generator-value row: moments twist by (-1)^i and
    /// the class moves by (c:d) -> (-c:d).
    fn apply_star_row(&self, row: &[BigInt]) -> Vec<BigInt> {
        let width = self.width();
        let mut out = vec![BigInt::zero(); self.ngens];
        for x in 0..self.p1.len() {
            let (c, d) = self.p1.rep(x);
            let xi = self
                .p1
                .index_of(-(c as i64), d as i64)
                .expect("star image stays in P^1");
            for i in 0..width {
                let v = row[xi * width + i].clone();
                out[x * width + i] = if i % 2 == 1 { -v } else { v };
            }
        }
        out
    }

    pub fn star_matrix_ambient(&self) -> Result<Vec<Vec<BigRational>>> {
        let d = self.basis.len();
        let mut mat = vec![vec![BigRational::zero(); d]; d];
        for (j, b) in self.basis.iter().enumerate() {
            let image = self.apply_star_row(b);
            let coords = coords_in_basis(&self.basis, &image)
                .ok_or_else(|| Error::ResourceLimit("star does not preserve the space".into()))?;
            for (i, v) in coords.iter().enumerate() {
                mat[i][j] = v.clone();
            }
        }
        Ok(mat)
    }

    /// The cuspidal subspace: the Hecke annihilator of the boundary part.
    /// Computed as the image of powers of (T_l - (1 + l^{k-1})) for small good
    /// primes l, and certified by the boundary-rank dimension count.
    fn compute_cuspidal_subspace(&self) -> Result<Vec<Vec<BigRational>>> {
        let d = self.basis.len();
        let target = self.cuspidal_dim;
        if target == 0 {
            return Ok(Vec::new());
        }
        if self.eisenstein_coords.is_empty() {
            // whole space is cuspidal
            let mut id = vec![vec![BigRational::zero(); d]; d];
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = BigRational::one();
            }
            return Ok(id);
        }
        let mut image: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut v = vec![BigRational::zero(); d];
                v[i] = BigRational::one();
                v
            })
            .collect();
        let mut ell = 2u64;
        loop {
            while self.level % ell == 0 {
                ell = next_prime(ell);
            }
            let t = self.hecke_matrix_ambient(ell)?;
            let eis = BigRational::from(BigInt::one() + BigInt::from(ell).pow(self.weight - 1));
            // Z = (T - eis)^d applied to current image vectors
            let mut z = t;
            for (i, row) in z.iter_mut().enumerate() {
                row[i] -= &eis;
            }
            for _ in 0..d {
                image = image
                    .iter()
                    .map(|v| linalg::mat_vec_rat(&z, v))
                    .collect::<Vec<_>>();
                image = reduce_rational_rows(&image, d);
                if image.len() == target {
                    break;
                }
            }
            if image.len() == target {
                return Ok(image);
            }
            if image.len() < target {
                return Err(Error::ResourceLimit(
                    "cuspidal subspace collapsed below the boundary count".into(),
                ));
            }
            ell = next_prime(ell);
            if ell > 100 {
                return Err(Error::ResourceLimit(
                    "could not isolate the cuspidal subspace with T_l, l <= 100".into(),
                ));
            }
        }
    }

    pub fn cuspidal_coords(&self) -> &[Vec<BigRational>] {
        &self.cuspidal_coords
    }

    /// Matrix of T_n restricted to the cuspidal subspace basis.
    pub fn hecke_matrix(&self, n: u64) -> Result<Vec<Vec<BigRational>>> {
        let t = self.hecke_matrix_ambient(n)?;
        self.restrict_to_cuspidal(&t)
    }

    /// Star involution restricted to the cuspidal subspace basis.
    pub fn star_involution(&self) -> Result<Vec<Vec<BigRational>>> {
        let s = self.star_matrix_ambient()?;
        self.restrict_to_cuspidal(&s)
    }

    fn restrict_to_cuspidal(&self, op: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
        let cs = &self.cuspidal_coords;
        let dim = cs.len();
        let mut mat = vec![vec![BigRational::zero(); dim]; dim];
        for (j, u) in cs.iter().enumerate() {
            let img = linalg::mat_vec_rat(op, u);
            let coords = express_in_rows(cs, &img).ok_or_else(|| {
                Error::ResourceLimit("operator does not preserve the cuspidal subspace".into())
            })?;
            for (i, v) in coords.iter().enumerate() {
                mat[i][j] = v.clone();
            }
        }
        Ok(mat)
    }

    /// Projector onto the cuspidal subspace along the Eisenstein part, in
    /// ambient basis coordinates.
    pub fn cuspidal_projector(&self) -> Result<Vec<Vec<BigRational>>> {
        let d = self.basis.len();
        let mut mixed: Vec<Vec<BigRational>> = Vec::new();
        mixed.extend(self.cuspidal_coords.iter().cloned());
        mixed.extend(self.eisenstein_coords.iter().cloned());
        if mixed.len() != d {
            return Err(Error::ResourceLimit(
                "cuspidal and Eisenstein parts do not fill the space".into(),
            ));
        }
        let cols = linalg::transpose(&mixed);
        let int_rows = clear_denominators_rows(&cols);
        let mut proj = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            let mut e = vec![BigInt::zero(); d];
            e[i] = denominator_scale(&cols, i);
            let x = linalg::solve(&int_rows, d, &e).ok_or_else(|| {
                Error::ResourceLimit("projector decomposition failed".into())
            })?;
            // cuspidal component: first cs.len() coefficients against cuspidal rows
            let mut comp = vec![BigRational::zero(); d];
            for (t, coeff) in x.iter().take(self.cuspidal_coords.len()).enumerate() {
                for (j, v) in self.cuspidal_coords[t].iter().enumerate() {
                    comp[j] += coeff * v;
                }
            }
            let scale = BigRational::from(denominator_scale(&cols, i));
            for (j, c) in comp.iter().enumerate() {
                proj[j][i] = c / &scale;
            }
        }
        Ok(proj)
    }

    /// Solve for the joint eigensymbol in the cuspidal subspace: killed by
    /// (T_l - a_l) for all supplied good l and by (star - sign).
    pub fn cuspidal_eigen_symbol(
        &self,
        eigenvalues: &[(u64, i64)],
        sign: i8,
    ) -> Result<SymbolVector> {
        let cs_dim = self.cuspidal_coords.len();
        if cs_dim == 0 {
            return Err(Error::AmbiguousEigensystem(0));
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for &(ell, a) in eigenvalues {
            let t = self.hecke_matrix(ell)?;
            for i in 0..cs_dim {
                let mut row = t[i].clone();
                row[i] -= BigRational::from(BigInt::from(a));
                rows.push(row);
            }
        }
        let s = self.star_involution()?;
        for i in 0..cs_dim {
            let mut row = s[i].clone();
            row[i] -= BigRational::from(BigInt::from(sign as i64));
            rows.push(row);
        }
        let int_rows = clear_denominators_rows(&rows);
        let ker = linalg::kernel(&int_rows, cs_dim)?;
        if ker.len() != 1 {
            return Err(Error::AmbiguousEigensystem(ker.len()));
        }
        // expand cuspidal coordinates to ambient coordinates
        let mut ambient = vec![BigRational::zero(); self.basis.len()];
        for (t, coeff) in ker[0].iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let c = BigRational::from(coeff.clone());
            for (j, v) in self.cuspidal_coords[t].iter().enumerate() {
                ambient[j] += &c * v;
            }
        }
        Ok(SymbolVector { coords: ambient })
    }

    /// Generator values (moment rows, ngens long) of a symbol given in basis
    /// coordinates.
    pub fn generator_values(&self, v: &SymbolVector) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.ngens];
        for (i, c) in v.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis[i].iter().enumerate() {
                if !b.is_zero() {
                    out[j] += c * BigRational::from(b.clone());
                }
            }
        }
        out
    }

    /// Eigenvalue of T_n on a joint eigenvector given in basis coordinates.
    pub fn eigenvalue_on(&self, v: &SymbolVector, n: u64) -> Result<BigRational> {
        let t = self.hecke_matrix_ambient(n)?;
        let img = linalg::mat_vec_rat(&t, &v.coords);
        let i = v
            .coords
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(Error::ZeroVector)?;
        let ratio = &img[i] / &v.coords[i];
        for (a, b) in img.iter().zip(&v.coords) {
            if *a != &ratio * b {
                return Err(Error::NonRational);
            }
        }
        Ok(ratio)
    }
}

fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !crate::arith::is_prime(m) {
        m += 1;
    }
    m
}

/// Express v (length ngens) in the given integer basis rows; None if v is not
/// in their span.
pub fn coords_in_basis(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigRational>> {
    if basis.is_empty() {
        return if v.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let ncols = v.len();
    let cols = linalg::transpose(basis);
    debug_assert_eq!(cols.len(), ncols);
    linalg::solve(&cols, basis.len(), v)
}

fn express_in_rows(rows: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    if rows.is_empty() {
        return if v.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let mut int_cols: Vec<Vec<BigRational>> = linalg::transpose(rows);
    // append nothing; solve over rationals by clearing denominators per row
    let mut cleared: Vec<Vec<BigInt>> = Vec::with_capacity(int_cols.len());
    let mut rhs: Vec<BigInt> = Vec::with_capacity(int_cols.len());
    for (row, b) in int_cols.iter_mut().zip(v) {
        let mut lcm = b.denom().clone();
        for x in row.iter() {
            lcm = lcm.lcm(x.denom());
        }
        cleared.push(
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
        rhs.push(b.numer() * (&lcm / b.denom()));
    }
    linalg::solve(&cleared, rows.len(), &rhs)
}

/// Row-reduce rational rows, dropping dependent ones.
fn reduce_rational_rows(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let int_rows = clear_denominators_rows(rows);
    let (echelon, _) = linalg::row_echelon(&int_rows, ncols);
    echelon
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from).collect())
        .collect()
}

fn clear_denominators_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

fn denominator_scale(cols: &[Vec<BigRational>], i: usize) -> BigInt {
    let mut lcm = BigInt::one();
    for x in &cols[i] {
        lcm = lcm.lcm(x.denom());
    }
    lcm
}

/// Gamma_0(N)-equivalence of cusps.
pub fn cusps_equivalent(s1: Cusp, s2: Cusp, n: u64) -> bool {
    // complete each primitive column (a, c) to an SL_2(Z) matrix [a,b;c,d]
    let comp = |s: Cusp| -> (i64, i64) {
        // find b, d with a d - b c = 1
        let (g, x, y) = ext_gcd(s.num, s.den);
        debug_assert_eq!(g.abs(), 1);
        // num*x + den*y = g; want num*d - b*den = 1
        if g == 1 {
            (-y, x)
        } else {
            (y, -x)
        }
    };
    let (_b1, d1) = comp(s1);
    let (_b2, d2) = comp(s2);
    let ni = n as i64;
    let c1c2 = (s1.den as i128 * s2.den as i128).rem_euclid(ni as i128) as i64;
    let g = c1c2.unsigned_abs().gcd(&n) as i64;
    let lhs = (s2.den as i128 * d1 as i128 - d2 as i128 * s1.den as i128).rem_euclid(ni as i128) as i64;
    lhs % g == 0
}

/// Width of a cusp a/c for Gamma_0(N).
pub fn cusp_width(s: Cusp, n: u64) -> u64 {
    let c2 = (s.den as u64).wrapping_mul(s.den as u64);
    let g = if s.den == 0 { n } else { c2.gcd(&n) };
    n / g.max(1)
}

/// Unimodular matrices g_t with {oo -> p/q} = sum_t g_t {0 -> oo}.
pub fn path_to_cusp(num: i64, den: i64) -> Vec<[i64; 4]> {
    if den == 0 {
        return Vec::new();
    }
    let (mut a, mut b) = (num, den);
    if b < 0 {
        a = -a;
        b = -b;
    }
    // continued fraction with floor division
    let mut quotients = Vec::new();
    loop {
        let q = a.div_euclid(b);
        let r = a.rem_euclid(b);
        quotients.push(q);
        a = b;
        b = r;
        if b == 0 {
            break;
        }
    }
    // convergents
    let (mut p_prev, mut q_prev) = (1i64, 0i64); // p_{-1}/q_{-1} = oo
    let (mut p_cur, mut q_cur) = (quotients[0], 1i64);
    let mut out = Vec::with_capacity(quotients.len());
    out.push(seg_matrix(p_cur, q_cur, p_prev, q_prev));
    for &q in quotients.iter().skip(1) {
        let p_next = q * p_cur + p_prev;
        let q_next = q * q_cur + q_prev;
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p_next, q_next);
        out.push(seg_matrix(p_cur, q_cur, p_prev, q_prev));
    }
    out
}

fn seg_matrix(p_cur: i64, q_cur: i64, p_prev: i64, q_prev: i64) -> [i64; 4] {
    // det [p_cur, e*p_prev; q_cur, e*q_prev] = e*(p_cur q_prev - p_prev q_cur) = 1
    let d = p_cur as i128 * q_prev as i128 - p_prev as i128 * q_cur as i128;
    debug_assert!(d == 1 || d == -1, "convergents are unimodular");
    let e = if d == 1 { 1 } else { -1 };
    [p_cur, e * p_prev, q_cur, e * q_prev]
}

/// Evaluate generator-value data on the path {oo -> cusp}; `values` holds the
/// ngens moments as rationals, the result is a moment vector of length k-1.
pub fn eval_path_from_infinity(
    p1: &P1Table,
    weight: u32,
    values: &[BigRational],
    cusp: Cusp,
) -> Vec<BigRational> {
    let width = (weight - 1) as usize;
    let mut acc = vec![BigRational::zero(); width];
    if cusp.is_infinity() {
        return acc;
    }
    for g in path_to_cusp(cusp.num, cusp.den) {
        let x = p1
            .index_of(g[2], g[3])
            .expect("unimodular bottom row is a valid P^1 class");
        let mat = moment_matrix(&adjugate(&g), weight);
        let src = &values[x * width..(x + 1) * width];
        for i in 0..width {
            for (j, m) in mat[i].iter().enumerate() {
                if !m.is_zero() && !src[j].is_zero() {
                    acc[i] += BigRational::from(m.clone()) * &src[j];
                }
            }
        }
    }
    acc
}

/// Integer variant of `eval_path_from_infinity` for content-normalized data.
pub fn eval_path_from_infinity_int(
    p1: &P1Table,
    weight: u32,
    values: &[BigInt],
    cusp: Cusp,
) -> Vec<BigInt> {
    let width = (weight - 1) as usize;
    let mut acc = vec![BigInt::zero(); width];
    if cusp.is_infinity() {
        return acc;
    }
    for g in path_to_cusp(cusp.num, cusp.den) {
        let x = p1
            .index_of(g[2], g[3])
            .expect("unimodular bottom row is a valid P^1 class");
        let mat = moment_matrix(&adjugate(&g), weight);
        let src = &values[x * width..(x + 1) * width];
        for i in 0..width {
            for (j, m) in mat[i].iter().enumerate() {
                if !m.is_zero() && !src[j].is_zero() {
                    acc[i] += m * &src[j];
                }
            }
        }
    }
    acc
}

/// Evaluate on a general path {from -> to} as a difference of paths from oo.
pub fn eval_path(
    p1: &P1Table,
    weight: u32,
    values: &[BigRational],
    from: Cusp,
    to: Cusp,
) -> Vec<BigRational> {
    let a = eval_path_from_infinity(p1, weight, values, to);
    let b = eval_path_from_infinity(p1, weight, values, from);
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Mod-p view of a symbol for fast sweeps: integer generator values reduced
/// mod p, path evaluation in u64 arithmetic.
pub struct SymbolModP {
    pub p: u64,
    pub weight: u32,
    values: Vec<u64>,
    p1: Arc<P1Table>,
}

impl SymbolModP {
    pub fn new(p1: Arc<P1Table>, weight: u32, values_int: &[BigInt], p: u64) -> Self {
        let pm = BigInt::from(p);
        let values = values_int
            .iter()
            .map(|v| v.mod_floor(&pm).to_u64().expect("reduced"))
            .collect();
        SymbolModP { p, weight, values, p1 }
    }

    /// Moments of the value on {oo -> num/den}, mod p.
    pub fn eval_to(&self, num: i64, den: i64) -> Vec<u64> {
        let width = (self.weight - 1) as usize;
        let mut acc = vec![0u64; width];
        if den == 0 {
            return acc;
        }
        let p = self.p;
        for g in path_to_cusp(num, den) {
            let x = self
                .p1
                .index_of(g[2], g[3])
                .expect("valid P^1 class");
            let mat = moment_matrix_mod_p(&adjugate(&g), self.weight, p);
            let src = &self.values[x * width..(x + 1) * width];
            for i in 0..width {
                let mut s: u128 = 0;
                for (j, &m) in mat[i].iter().enumerate() {
                    s += m as u128 * src[j] as u128;
                }
                acc[i] = ((acc[i] as u128 + s) % p as u128) as u64;
            }
        }
        acc
    }
}

fn moment_matrix_mod_p(delta: &[i64; 4], k: u32, p: u64) -> Vec<Vec<u64>> {
    let deg = (k - 2) as usize;
    let [a, b, c, d] = *delta;
    let rd = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut rows = Vec::with_capacity(deg + 1);
    for i in 0..=deg {
        let p1 = binomial_expand_mod_p(rd(d), rd(-b), i, p);
        let p2 = binomial_expand_mod_p(rd(-c), rd(a), deg - i, p);
        let mut row = vec![0u64; deg + 1];
        for (j1, &c1) in p1.iter().enumerate() {
            if c1 == 0 {
                continue;
            }
            for (j2, &c2) in p2.iter().enumerate() {
                let k = j1 + j2;
                row[k] = ((row[k] as u128 + c1 as u128 * c2 as u128) % p as u128) as u64;
            }
        }
        rows.push(row);
    }
    rows
}

fn binomial_expand_mod_p(u: u64, v: u64, n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    // track binom(n, j) as exact u128 (n <= 10 here), then reduce
    let mut binom: u128 = 1;
    for j in 0..=n {
        let term = binom % p as u128
            * crate::arith::pow_mod(u, j as u64, p) as u128
            % p as u128
            * crate::arith::pow_mod(v, (n - j) as u64, p) as u128
            % p as u128;
        out[j] = term as u64;
        if j < n {
            binom = binom * (n - j) as u128 / (j + 1) as u128;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_sizes() {
        assert_eq!(P1Table::build(11).len(), 12);
        assert_eq!(P1Table::build(7).len(), 8);
        assert_eq!(P1Table::build(1).len(), 1);
        // psi(N) for composite N = 12: 12 * (1+1/2)(1+1/3) = 24
        assert_eq!(P1Table::build(12).len(), 24);
    }

    #[test]
    fn p1_action_orders() {
        let p1 = P1Table::build(11);
        for x in 0..p1.len() {
            let xs = p1.act(x, &SIGMA).unwrap();
            let xss = p1.act(xs, &SIGMA).unwrap();
            assert_eq!(xss, x, "sigma^2 = -1 acts trivially on P^1");
            let xt = p1.act(x, &TAU).unwrap();
            let xt2 = p1.act(xt, &TAU).unwrap();
            let xt3 = p1.act(xt2, &TAU).unwrap();
            assert_eq!(xt3, x, "tau^3 = 1");
        }
    }

    #[test]
    fn lifts_have_det_one() {
        for n in [1u64, 2, 11, 12, 37] {
            let p1 = P1Table::build(n);
            for i in 0..p1.len() {
                let (c, d) = p1.rep(i);
                let g = lift_to_sl2(c, d, n);
                assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
                assert_eq!(p1.index_of(g[2], g[3]), Some(i));
            }
        }
    }

    #[test]
    fn ambient_dims() {
        // dim = 2 dim S_k + (Eisenstein part)
        assert_eq!(ManinSymbolSpace::build(11, 2).unwrap().ambient_dim(), 3);
        assert_eq!(ManinSymbolSpace::build(2, 2).unwrap().ambient_dim(), 1);
        assert_eq!(ManinSymbolSpace::build(1, 12).unwrap().ambient_dim(), 3);
        assert_eq!(ManinSymbolSpace::build(37, 2).unwrap().ambient_dim(), 5);
    }

    #[test]
    fn cuspidal_dims() {
        assert_eq!(ManinSymbolSpace::build(11, 2).unwrap().cuspidal_dim(), 2);
        assert_eq!(ManinSymbolSpace::build(2, 2).unwrap().cuspidal_dim(), 0);
        assert_eq!(ManinSymbolSpace::build(37, 2).unwrap().cuspidal_dim(), 4);
        assert_eq!(ManinSymbolSpace::build(1, 12).unwrap().cuspidal_dim(), 2);
    }

    #[test]
    fn space_guard() {
        assert!(matches!(
            ManinSymbolSpace::build_with_limit(100, 50, 100),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn hecke_t1_is_identity() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let t1 = s.hecke_matrix(1).unwrap();
        for i in 0..t1.len() {
            for j in 0..t1.len() {
                let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(t1[i][j], expect);
            }
        }
    }

    #[test]
    fn hecke_t2_on_gamma0_11_is_minus_two() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let t2 = s.hecke_matrix(2).unwrap();
        assert_eq!(t2.len(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j {
                    BigRational::from(BigInt::from(-2))
                } else {
                    BigRational::zero()
                };
                assert_eq!(t2[i][j], expect, "T_2 = -2 on the cuspidal part of level 11");
            }
        }
    }

    #[test]
    fn hecke_multiplicative_coprime() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let t6 = s.hecke_matrix(6).unwrap();
        let t2 = s.hecke_matrix(2).unwrap();
        let t3 = s.hecke_matrix(3).unwrap();
        assert_eq!(t6, linalg::mat_mul_rat(&t2, &t3));
    }

    #[test]
    fn hecke_commute() {
        let s = ManinSymbolSpace::build(37, 2).unwrap();
        for (m, n) in [(2u64, 3u64), (2, 5), (3, 5), (2, 7)] {
            let a = s.hecke_matrix(m).unwrap();
            let b = s.hecke_matrix(n).unwrap();
            assert_eq!(
                linalg::mat_mul_rat(&a, &b),
                linalg::mat_mul_rat(&b, &a),
                "T_{m} and T_{n} commute"
            );
        }
    }

    #[test]
    fn star_squares_to_identity_and_commutes() {
        for (n, k) in [(11u64, 2u32), (1, 12), (37, 2)] {
            let s = ManinSymbolSpace::build(n, k).unwrap();
            let iota = s.star_involution().unwrap();
            let sq = linalg::mat_mul_rat(&iota, &iota);
            for i in 0..sq.len() {
                for j in 0..sq.len() {
                    let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(sq[i][j], expect);
                }
            }
            let t2 = s.hecke_matrix(2).unwrap();
            assert_eq!(
                linalg::mat_mul_rat(&iota, &t2),
                linalg::mat_mul_rat(&t2, &iota)
            );
        }
    }

    #[test]
    fn star_trace_zero_on_level_11() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let iota = s.star_involution().unwrap();
        let tr: BigRational = (0..iota.len()).map(|i| iota[i][i].clone()).sum();
        assert_eq!(tr, BigRational::zero());
    }

    #[test]
    fn cuspidal_projector_commutes() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let p = s.cuspidal_projector().unwrap();
        let p2 = linalg::mat_mul_rat(&p, &p);
        assert_eq!(p, p2, "projector is idempotent");
        let t2 = s.hecke_matrix_ambient(2).unwrap();
        assert_eq!(
            linalg::mat_mul_rat(&p, &t2),
            linalg::mat_mul_rat(&t2, &p),
            "projector commutes with T_2"
        );
        let iota = s.star_matrix_ambient().unwrap();
        assert_eq!(
            linalg::mat_mul_rat(&p, &iota),
            linalg::mat_mul_rat(&iota, &p),
            "projector commutes with star"
        );
    }

    #[test]
    fn eigen_symbol_level_11() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let v = s.cuspidal_eigen_symbol(&[(2, -2), (3, -1)], 1).unwrap();
        assert!(v.coords.iter().any(|c| !c.is_zero()));
        // ratio check on another prime: a_5(11a) = 1
        assert_eq!(
            s.eigenvalue_on(&v, 5).unwrap(),
            BigRational::from(BigInt::from(1))
        );
        assert!(matches!(
            s.cuspidal_eigen_symbol(&[(2, 0)], 1),
            Err(Error::AmbiguousEigensystem(0))
        ));
        let s2 = ManinSymbolSpace::build(2, 2).unwrap();
        assert!(matches!(
            s2.cuspidal_eigen_symbol(&[(3, 1)], 1),
            Err(Error::AmbiguousEigensystem(0))
        ));
    }

    #[test]
    fn path_additivity_and_reversal() {
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        let v = s.cuspidal_eigen_symbol(&[(2, -2)], 1).unwrap();
        let vals = s.generator_values(&v);
        let a = Cusp::new(0, 1);
        let b = Cusp::new(1, 3);
        let c = Cusp::new(2, 7);
        let ab = eval_path(s.p1(), 2, &vals, a, b);
        let bc = eval_path(s.p1(), 2, &vals, b, c);
        let ac = eval_path(s.p1(), 2, &vals, a, c);
        for j in 0..ab.len() {
            assert_eq!(&ab[j] + &bc[j], ac[j]);
        }
        let ba = eval_path(s.p1(), 2, &vals, b, a);
        for j in 0..ab.len() {
            assert_eq!(ab[j], -ba[j].clone());
        }
        let aa = eval_path(s.p1(), 2, &vals, a, a);
        assert!(aa.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn relation_rows_are_killed_by_basis() {
        let s = ManinSymbolSpace::build(37, 2).unwrap();
        for b in s.basis_rows() {
            for r in s.relation_rows() {
                let dot: BigInt = b.iter().zip(r).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn weight_twelve_level_one_hecke_trace() {
        // M_12(SL_2(Z)) symbols: eigenvalues of T_2 are tau(2) = -24 twice and
        // 1 + 2^11 = 2049 on the Eisenstein line.
        let s = ManinSymbolSpace::build(1, 12).unwrap();
        let t2 = s.hecke_matrix_ambient(2).unwrap();
        let tr: BigRational = (0..t2.len()).map(|i| t2[i][i].clone()).sum();
        assert_eq!(tr, BigRational::from(BigInt::from(-24 * 2 + 2049)));
        let t2c = s.hecke_matrix(2).unwrap();
        let trc: BigRational = (0..t2c.len()).map(|i| t2c[i][i].clone()).sum();
        assert_eq!(trc, BigRational::from(BigInt::from(-48)));
    }

    #[test]
    fn cusp_equivalence_level_11() {
        // X_0(11) has exactly the two cusps 0 and oo
        let s = ManinSymbolSpace::build(11, 2).unwrap();
        assert_eq!(s.cusp_classes().len(), 2);
        assert!(cusps_equivalent(Cusp::new(1, 3), Cusp::new(1, 5), 11));
        assert!(!cusps_equivalent(Cusp::infinity(), Cusp::new(0, 1), 11));
    }

    #[test]
    fn path_matrices_compose() {
        for (num, den) in [(3i64, 7i64), (-5, 13), (22, 7), (-1, 1), (0, 1), (105, 211)] {
            let mats = path_to_cusp(num, den);
            assert!(!mats.is_empty());
            // last matrix sends oo to num/den; chain endpoints are consistent
            let last = mats.last().unwrap();
            assert_eq!(
                Cusp::new(last[0], last[2]),
                Cusp::new(num, den),
                "terminal convergent reaches the cusp"
            );
            let first = mats.first().unwrap();
            assert_eq!(first[3], 0, "first segment starts at oo");
            for w in mats.windows(2) {
                assert_eq!(
                    Cusp::new(w[0][0], w[0][2]),
                    Cusp::new(w[1][1], w[1][3]),
                    "segments chain head to tail"
                );
            }
            for g in mats {
                assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
            }
        }
    }
}
