//! Univariate factorization over Q.
//!
//! Pipeline: Yun square-free decomposition, then for each square-free part a
//! Berlekamp factorization modulo a small good prime, quadratic Hensel
//! lifting past the Mignotte bound, and subset recombination over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::unipoly::UniPoly;

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Monic irreducible factors of `p` over Q with multiplicities, ordered by
/// (degree, coefficients). The product of `f_i^{m_i}` times the leading
/// content of `p` recovers `p`.
pub fn univariate_factor(p: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    for (part, mult) in p.squarefree_decomposition()? {
        let (_, prim) = part.primitive_z();
        for f in factor_squarefree_z(&prim)? {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| cmp_factor(&a.0, &b.0));
    Ok(out)
}

fn cmp_factor(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

/// Factors a primitive square-free integer polynomial; returns monic
/// rational irreducible factors.
fn factor_squarefree_z(prim: &[BigInt]) -> Result<Vec<UniPoly>> {
    let n = prim.len() - 1;
    let poly_q = UniPoly::new(prim.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if n == 1 {
        return Ok(vec![poly_q.monic()]);
    }
    // Monic transform: T(z) = lc^(n-1) * S(z/lc), so coefficient k picks up
    // lc^(n-1-k); the leading coefficient becomes 1.
    let lc = prim[n].clone();
    let mut t: Vec<BigInt> = Vec::with_capacity(n + 1);
    for (k, c) in prim.iter().enumerate().take(n) {
        t.push(c * pow_bigint(&lc, (n - 1 - k) as u32));
    }
    t.push(BigInt::one());

    let (p, modular) = berlekamp_over_good_prime(&t)?;
    if modular.len() == 1 {
        return Ok(vec![poly_q.monic()]);
    }

    let target = mignotte_target(&t);
    let lifted = hensel_tree(&t, &modular, p, &target);
    let modulus = lifted.modulus;
    let factors_t = recombine(&t, lifted.factors, &modulus);

    // Map factors of T back through z -> lc * z.
    let lc_q = BigRational::from_integer(lc);
    let mut out = Vec::new();
    for f in factors_t {
        let fq = UniPoly::new(f.iter().map(|c| BigRational::from_integer(c.clone())).collect());
        out.push(fq.scale_variable(&lc_q).monic());
    }
    Ok(out)
}

fn pow_bigint(b: &BigInt, e: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// 2^n * ceil(|T|_2) + 1, a bound past which integer factor coefficients are
/// determined by their symmetric residues.
fn mignotte_target(t: &[BigInt]) -> BigInt {
    let n = t.len() - 1;
    let norm_sq: BigInt = t.iter().map(|c| c * c).sum();
    let root = norm_sq.sqrt() + 1;
    (pow_bigint(&BigInt::from(2), n as u32 + 1)) * root + 1
}

// ---- arithmetic in F_p[x], p < 2^31, coefficients as u64 ----

type FpPoly = Vec<u64>;

fn fp_trim(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    fp_trim(v)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut v = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        v[i] = (x + p - y) % p;
    }
    fp_trim(v)
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on i128 to dodge sign juggling
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    (t.rem_euclid(p as i128)) as u64
}

fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    let mut rem: Vec<u64> = a.to_vec();
    let mut quo = vec![0u64; a.len().saturating_sub(db)];
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = rem[k] * inv % p;
        if c != 0 {
            quo[k - db] = c;
            for (j, &bc) in b.iter().enumerate() {
                let idx = k - db + j;
                rem[idx] = (rem[idx] + p - c * bc % p) % p;
            }
        }
        rem.pop();
    }
    (fp_trim(quo), fp_trim(rem))
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = fp_divmod(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let inv = fp_inv(l, p);
        for c in &mut x {
            *c = *c * inv % p;
        }
    }
    x
}

fn fp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divmod(&r0, &r1, p);
        let ns = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let nt = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(&l) = r0.last() {
        let inv = fp_inv(l, p);
        for v in [&mut r0, &mut s0, &mut t0] {
            for c in v.iter_mut() {
                *c = *c * inv % p;
            }
        }
    }
    (r0, s0, t0)
}

fn fp_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let mut b = fp_divmod(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divmod(&fp_mul(&acc, &b, p), modulus, p).1;
        }
        e >>= 1;
        if e > 0 {
            b = fp_divmod(&fp_mul(&b, &b, p), modulus, p).1;
        }
    }
    acc
}

/// Finds a prime where the monic integer polynomial stays square-free and
/// returns its Berlekamp factorization there (monic factors).
fn berlekamp_over_good_prime(t: &[BigInt]) -> Result<(u64, Vec<FpPoly>)> {
    for &p in PRIMES {
        let tp: FpPoly = fp_trim(t.iter().map(|c| mod_floor_u64(c, p)).collect());
        if tp.len() != t.len() {
            continue; // leading coefficient vanished (cannot happen: monic)
        }
        let dtp = fp_derivative(&tp, p);
        if dtp.is_empty() {
            continue;
        }
        if fp_gcd(&tp, &dtp, p).len() != 1 {
            continue;
        }
        return Ok((p, berlekamp(&tp, p)));
    }
    Err(Error::Unsupported(
        "no small prime keeps the polynomial square-free".into(),
    ))
}

fn fp_derivative(a: &[u64], p: u64) -> FpPoly {
    if a.len() <= 1 {
        return Vec::new();
    }
    fp_trim(
        a[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * ((i as u64 + 1) % p) % p)
            .collect(),
    )
}

fn mod_floor_u64(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Berlekamp factorization of a monic square-free polynomial mod p.
fn berlekamp(f: &[u64], p: u64) -> Vec<FpPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    // rows of M: z^(i*p) mod f
    let mut rows: Vec<FpPoly> = Vec::with_capacity(n);
    let zp = fp_pow_mod(&[0, 1], p, f, p);
    let mut cur: FpPoly = vec![1];
    for _ in 0..n {
        rows.push(cur.clone());
        cur = fp_divmod(&fp_mul(&cur, &zp, p), f, p).1;
    }
    // kernel of (M^T - I): columns v with M^T v = v, i.e. rows^T.
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            a[j][i] = row.get(j).copied().unwrap_or(0);
        }
    }
    for i in 0..n {
        a[i][i] = (a[i][i] + p - 1) % p;
    }
    let kernel = fp_kernel(a, p);
    let r = kernel.len();
    let mut factors: Vec<FpPoly> = vec![f.to_vec()];
    if r == 1 {
        return factors;
    }
    'outer: for v in &kernel {
        let vp = fp_trim(v.clone());
        if vp.len() <= 1 {
            continue;
        }
        for c in 0..p {
            let mut next: Vec<FpPoly> = Vec::new();
            let shifted = {
                let mut w = vp.clone();
                w[0] = (w[0] + p - c) % p;
                fp_trim(w)
            };
            for fac in &factors {
                if fac.len() <= 2 {
                    next.push(fac.clone());
                    continue;
                }
                let g = fp_gcd(fac, &shifted, p);
                if g.len() > 1 && g.len() < fac.len() {
                    let (q, _) = fp_divmod(fac, &g, p);
                    next.push(g);
                    next.push(q);
                } else {
                    next.push(fac.clone());
                }
            }
            factors = next;
            if factors.len() == r {
                break 'outer;
            }
        }
    }
    factors
}

/// Kernel basis of a square matrix over F_p (column vectors).
fn fp_kernel(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        let mut piv = None;
        for r in row..n {
            if a[r][col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        a.swap(row, piv);
        let inv = fp_inv(a[row][col], p);
        for j in 0..n {
            a[row][j] = a[row][j] * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let m = a[r][col];
                for j in 0..n {
                    a[r][j] = (a[r][j] + p - m * a[row][j] % p) % p;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut basis = Vec::new();
    for col in 0..n {
        if pivot_of_col[col].is_some() {
            continue;
        }
        let mut v = vec![0u64; n];
        v[col] = 1;
        for c in 0..n {
            if let Some(r) = pivot_of_col[c] {
                v[c] = (p - a[r][col]) % p;
            }
        }
        basis.push(v);
    }
    basis
}

// ---- Hensel lifting over Z/m ----

type ZPoly = Vec<BigInt>;

struct Lifted {
    factors: Vec<ZPoly>,
    modulus: BigInt,
}

fn z_trim(mut v: ZPoly) -> ZPoly {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn z_reduce(v: &[BigInt], m: &BigInt) -> ZPoly {
    z_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    z_reduce(&v, m)
}

fn z_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for (i, item) in v.iter_mut().enumerate() {
        *item = (a.get(i).cloned().unwrap_or_else(BigInt::zero)
            + b.get(i).cloned().unwrap_or_else(BigInt::zero))
        .mod_floor(m);
    }
    z_trim(v)
}

fn z_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for (i, item) in v.iter_mut().enumerate() {
        *item = (a.get(i).cloned().unwrap_or_else(BigInt::zero)
            - b.get(i).cloned().unwrap_or_else(BigInt::zero))
        .mod_floor(m);
    }
    z_trim(v)
}

/// Division by a monic polynomial over Z/m.
fn z_divmod_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(b.last().map_or(false, |c| c.is_one()));
    let db = b.len() - 1;
    let mut rem: Vec<BigInt> = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len().saturating_sub(db)];
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = rem[k].mod_floor(m);
        if !c.is_zero() {
            quo[k - db] = c.clone();
            for (j, bc) in b.iter().enumerate() {
                let idx = k - db + j;
                let sub = (&c * bc).mod_floor(m);
                rem[idx] = (&rem[idx] - sub).mod_floor(m);
            }
        }
        rem.pop();
    }
    (z_reduce(&quo, m), z_reduce(&rem, m))
}

/// One quadratic Hensel step: from mod m to mod m^2.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = z_sub(f, &z_mul(g, h, &m2), &m2);
    let se = z_mul(s, &e, &m2);
    let (q, r) = z_divmod_monic(&se, h, &m2);
    let g1 = z_add(&z_add(g, &z_mul(t, &e, &m2), &m2), &z_mul(&q, g, &m2), &m2);
    let h1 = z_add(h, &r, &m2);
    let b = z_sub(
        &z_add(&z_mul(s, &g1, &m2), &z_mul(t, &h1, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let sb = z_mul(s, &b, &m2);
    let (c, d) = z_divmod_monic(&sb, &h1, &m2);
    let s1 = z_sub(s, &d, &m2);
    let t1 = z_sub(&z_sub(t, &z_mul(t, &b, &m2), &m2), &z_mul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

/// Lifts the pair (g, h) with f = g*h mod p up past `target`.
fn hensel_pair(
    f: &[BigInt],
    g0: &[BigInt],
    h0: &[BigInt],
    s0: &[BigInt],
    t0: &[BigInt],
    p: u64,
    target: &BigInt,
) -> (ZPoly, ZPoly, BigInt) {
    let mut m = BigInt::from(p);
    let (mut g, mut h, mut s, mut t) = (g0.to_vec(), h0.to_vec(), s0.to_vec(), t0.to_vec());
    while &m < target {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    (g, h, m)
}

fn fp_to_z(v: &[u64]) -> ZPoly {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Recursive multi-factor lift: factors multiply to f mod p; the result
/// multiplies to f mod the returned modulus.
fn hensel_tree(f: &[BigInt], modular: &[FpPoly], p: u64, target: &BigInt) -> Lifted {
    fn recurse(f: &ZPoly, parts: &[FpPoly], p: u64, target: &BigInt, out: &mut Vec<ZPoly>) -> BigInt {
        if parts.len() == 1 {
            out.push(f.clone());
            return target.clone();
        }
        let (left, right) = parts.split_at(parts.len() / 2);
        let mut gp: FpPoly = vec![1];
        for q in left {
            gp = fp_mul(&gp, q, p);
        }
        let mut hp: FpPoly = vec![1];
        for q in right {
            hp = fp_mul(&hp, q, p);
        }
        let (one, s, t) = fp_ext_gcd(&gp, &hp, p);
        debug_assert_eq!(one, vec![1]);
        let (g, h, m) = hensel_pair(f, &fp_to_z(&gp), &fp_to_z(&hp), &fp_to_z(&s), &fp_to_z(&t), p, target);
        let m1 = recurse(&g, left, p, &m, out);
        let m2 = recurse(&h, right, p, &m, out);
        m1.min(m2)
    }
    let mut out = Vec::new();
    let f_owned = f.to_vec();
    let m = recurse(&f_owned, modular, p, target, &mut out);
    Lifted { factors: out, modulus: m }
}

fn symmetric(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / BigInt::from(2);
    z_trim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn z_to_unipoly(v: &[BigInt]) -> UniPoly {
    UniPoly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Subset recombination: assembles true integer factors of the monic
/// polynomial `t` from its lifted modular factors.
fn recombine(t: &[BigInt], modular: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut remaining = z_to_unipoly(t);
    let mut pool: Vec<ZPoly> = modular;
    let mut found: Vec<ZPoly> = Vec::new();
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut advanced = false;
        let indices: Vec<usize> = (0..pool.len()).collect();
        for combo in combinations(&indices, size) {
            let mut prod: ZPoly = vec![BigInt::one()];
            for &i in &combo {
                prod = z_mul(&prod, &pool[i], m);
            }
            let cand = symmetric(&prod, m);
            let cand_poly = z_to_unipoly(&cand);
            if let Ok(q) = remaining.div_exact(&cand_poly) {
                found.push(cand);
                remaining = q;
                let mut keep = Vec::new();
                for (i, f) in pool.into_iter().enumerate() {
                    if !combo.contains(&i) {
                        keep.push(f);
                    }
                }
                pool = keep;
                advanced = true;
                break;
            }
        }
        if !advanced {
            size += 1;
        }
    }
    if remaining.degree().map_or(false, |d| d > 0) {
        let (_, prim) = remaining.primitive_z();
        found.push(prim);
    }
    found
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
