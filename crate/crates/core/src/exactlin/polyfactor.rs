//! Univariate polynomial factorization over Q (Berlekamp + Hensel +
//! Zassenhaus recombination). Inputs here are minimal polynomials of small
//! matrices, so degrees and coefficients stay desk-scale.

use super::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Little-endian integer polynomial, no leading zeros.
type ZPoly = Vec<BigInt>;

fn trim(mut f: ZPoly) -> ZPoly {
    while f.last().map(|c| c.is_zero()).unwrap_or(false) {
        f.pop();
    }
    f
}

fn deg(f: &ZPoly) -> usize {
    assert!(!f.is_empty());
    f.len() - 1
}

fn zmul(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(out)
}

fn content(f: &ZPoly) -> BigInt {
    let mut c = BigInt::zero();
    for a in f {
        c = c.gcd(a);
    }
    c
}

fn primitive(f: &ZPoly) -> ZPoly {
    let c = content(f);
    if c.is_zero() || c.is_one() {
        return f.clone();
    }
    f.iter().map(|a| a / &c).collect()
}

/// Exact division in Z[x]; `None` if it does not divide.
fn zdiv_exact(f: &ZPoly, g: &ZPoly) -> Option<ZPoly> {
    if g.is_empty() {
        return None;
    }
    let mut rem = f.clone();
    let mut q = vec![BigInt::zero(); f.len().saturating_sub(g.len()) + 1];
    let glc = g.last().unwrap().clone();
    while !rem.is_empty() && rem.len() >= g.len() {
        let (lead, r) = rem.last().unwrap().div_rem(&glc);
        if !r.is_zero() {
            return None;
        }
        let shift = rem.len() - g.len();
        q[shift] = lead.clone();
        for (i, c) in g.iter().enumerate() {
            rem[shift + i] -= &lead * c;
        }
        rem = trim(rem);
    }
    if rem.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

mod fp {
    //! Arithmetic in F_p[x] for a machine prime p.

    pub type FPoly = Vec<u64>;

    pub fn trim(mut f: FPoly) -> FPoly {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b, p);
            }
            b = mulmod(b, b, p);
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn mul(f: &FPoly, g: &FPoly, p: u64) -> FPoly {
        if f.is_empty() || g.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        trim(out)
    }

    pub fn rem(f: &FPoly, g: &FPoly, p: u64) -> FPoly {
        let mut r = f.clone();
        let glc_inv = inv(*g.last().unwrap(), p);
        while !r.is_empty() && r.len() >= g.len() {
            let lead = mulmod(*r.last().unwrap(), glc_inv, p);
            let shift = r.len() - g.len();
            for (i, &c) in g.iter().enumerate() {
                let sub = mulmod(lead, c, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(mut a: FPoly, mut b: FPoly, p: u64) -> FPoly {
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    pub fn monic(f: &FPoly, p: u64) -> FPoly {
        if f.is_empty() {
            return vec![];
        }
        let li = inv(*f.last().unwrap(), p);
        f.iter().map(|&c| mulmod(c, li, p)).collect()
    }

    pub fn deriv(f: &FPoly, p: u64) -> FPoly {
        if f.len() <= 1 {
            return vec![];
        }
        trim(
            f.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(i as u64 % p, c, p))
                .collect(),
        )
    }

    /// x^e mod f.
    pub fn xpow_mod(e: u64, f: &FPoly, p: u64) -> FPoly {
        let mut acc = vec![1u64];
        let mut base = rem(&vec![0, 1], f, p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        acc
    }

    /// Berlekamp factorization of a squarefree monic polynomial mod p.
    pub fn berlekamp(f: &FPoly, p: u64) -> Vec<FPoly> {
        let n = super::deg_f(f);
        if n <= 1 {
            return vec![f.clone()];
        }
        // Matrix of x^(ip) mod f, minus identity.
        let mut q = vec![vec![0u64; n]; n];
        for i in 0..n {
            let xi = xpow_mod(i as u64 * p, f, p);
            for (j, &c) in xi.iter().enumerate() {
                q[j][i] = c;
            }
        }
        for i in 0..n {
            q[i][i] = (q[i][i] + p - 1) % p;
        }
        let kernel = nullspace(&q, p);
        if kernel.len() == 1 {
            return vec![f.clone()];
        }
        // Split with a non-constant kernel vector.
        let v = kernel
            .iter()
            .find(|v| v.iter().skip(1).any(|&c| c != 0))
            .expect("kernel contains a non-constant vector");
        let vpoly = trim(v.clone());
        let mut out = Vec::new();
        for s in 0..p {
            let mut shifted = vpoly.clone();
            if shifted.is_empty() {
                shifted = vec![0];
            }
            shifted[0] = (shifted[0] + p - s) % p;
            let g = gcd(f.clone(), trim(shifted), p);
            if !g.is_empty() && super::deg_f(&g) > 0 && super::deg_f(&g) < n {
                out.extend(berlekamp(&g, p));
                let cof = divide(f, &g, p);
                out.extend(berlekamp(&cof, p));
                return out;
            }
        }
        unreachable!("berlekamp split must succeed for reducible f");
    }

    pub fn divide(f: &FPoly, g: &FPoly, p: u64) -> FPoly {
        let mut r = f.clone();
        if f.len() < g.len() {
            assert!(f.is_empty(), "non-exact division");
            return vec![];
        }
        let mut q = vec![0u64; f.len() - g.len() + 1];
        let glc_inv = inv(*g.last().unwrap(), p);
        while !r.is_empty() && r.len() >= g.len() {
            let lead = mulmod(*r.last().unwrap(), glc_inv, p);
            let shift = r.len() - g.len();
            q[shift] = lead;
            for (i, &c) in g.iter().enumerate() {
                let sub = mulmod(lead, c, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        assert!(r.is_empty(), "non-exact division");
        trim(q)
    }

    fn nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let n = m.len();
        let mut a: Vec<Vec<u64>> = m.to_vec();
        let mut pivot_col_of_row = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r >= n {
                break;
            }
            if let Some(pr) = (r..n).find(|&i| a[i][c] != 0) {
                a.swap(pr, r);
                let pi = inv(a[r][c], p);
                for j in 0..n {
                    a[r][j] = mulmod(a[r][j], pi, p);
                }
                for i in 0..n {
                    if i != r && a[i][c] != 0 {
                        let f = a[i][c];
                        for j in 0..n {
                            let sub = mulmod(f, a[r][j], p);
                            a[i][j] = (a[i][j] + p - sub) % p;
                        }
                    }
                }
                pivot_col_of_row.push(c);
                r += 1;
            }
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_col_of_row.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            basis.push(v);
        }
        basis
    }
}

fn deg_f(f: &[u64]) -> usize {
    assert!(!f.is_empty());
    f.len() - 1
}

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283,
];

/// Hensel lift of a coprime factorization f ≡ g·h (mod p) to modulus p^K ≥ bound.
/// All polynomials monic mod the modulus is NOT assumed; g is kept monic,
/// f and h have matching leading coefficient.
fn hensel_pair(
    f: &ZPoly,
    g0: &fp::FPoly,
    h0: &fp::FPoly,
    p: u64,
    bound: &BigInt,
) -> (ZPoly, ZPoly, BigInt) {
    // Work with symmetric representatives mod m; start from mod p data.
    let to_z = |f: &fp::FPoly| -> ZPoly { trim(f.iter().map(|&c| BigInt::from(c)).collect()) };
    // Bezout: s g + t h = 1 mod p.
    let (s0, t0) = fp_bezout(g0, h0, p);
    let mut g = to_z(g0);
    let mut h = to_z(h0);
    let mut s = to_z(&s0);
    let mut t = to_z(&t0);
    let mut m = BigInt::from(p);
    while &m <= bound {
        // e = f - g h (mod m^2)
        let m2 = &m * &m;
        let e = zmod_sym(&zsub(f, &zmul(&g, &h)), &m2);
        // q, r with s e = q h + r
        let (q, r) = zdivmod_mod(&zmul(&s, &e), &h, &m2);
        let gnew = zmod_sym(&zadd(&zadd(&g, &zmul(&t, &e)), &zmul(&q, &g)), &m2);
        let hnew = zmod_sym(&zadd(&h, &r), &m2);
        // lift Bezout: b = s gnew + t hnew - 1 (mod m^2)
        let b = zmod_sym(
            &zsub(&zadd(&zmul(&s, &gnew), &zmul(&t, &hnew)), &vec![BigInt::one()]),
            &m2,
        );
        let (c, d) = zdivmod_mod(&zmul(&s, &b), &hnew, &m2);
        let snew = zmod_sym(&zsub(&s, &d), &m2);
        let tnew = zmod_sym(&zsub(&zsub(&t, &zmul(&t, &b)), &zmul(&c, &gnew)), &m2);
        g = gnew;
        h = hnew;
        s = snew;
        t = tnew;
        m = m2;
    }
    (g, h, m)
}

fn fp_bezout(g: &fp::FPoly, h: &fp::FPoly, p: u64) -> (fp::FPoly, fp::FPoly) {
    // Extended Euclid in F_p[x]: s g + t h = 1 (g, h coprime).
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let q = fp::divide(&zsub_f(&r0, &fp::rem(&r0, &r1, p), p), &r1, p);
        let r2 = fp::rem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp::mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp::mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    // Normalize so that s g + t h = 1 exactly (r0 is a nonzero constant).
    let c = fp::inv(r0[0], p);
    let scale = |f: &fp::FPoly| -> fp::FPoly { f.iter().map(|&x| fp::mulmod(x, c, p)).collect() };
    (fp::trim(scale(&s0)), fp::trim(scale(&t0)))
}

fn fp_sub(a: &fp::FPoly, b: &fp::FPoly, p: u64) -> fp::FPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    fp::trim(out)
}

fn zsub_f(a: &fp::FPoly, b: &fp::FPoly, p: u64) -> fp::FPoly {
    fp_sub(a, b, p)
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, item) in out.iter_mut().enumerate() {
        if i < a.len() {
            *item += &a[i];
        }
        if i < b.len() {
            *item += &b[i];
        }
    }
    trim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, item) in out.iter_mut().enumerate() {
        if i < a.len() {
            *item += &a[i];
        }
        if i < b.len() {
            *item -= &b[i];
        }
    }
    trim(out)
}

/// Symmetric remainder of every coefficient mod m.
fn zmod_sym(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        f.iter()
            .map(|c| {
                let mut r = c.mod_floor(m);
                if r > half {
                    r -= m;
                }
                r
            })
            .collect(),
    )
}

/// Division with remainder of a by b where b is monic mod m; coefficients
/// reduced symmetrically mod m.
fn zdivmod_mod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = zmod_sym(a, m);
    let mut q: ZPoly = vec![BigInt::zero(); a.len().saturating_sub(b.len()) + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        q[shift] = &q[shift] + &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &lead * c;
        }
        r = zmod_sym(&r, m);
    }
    (zmod_sym(&trim(q), m), r)
}

/// Factor a squarefree primitive integer polynomial into irreducible
/// primitive integer polynomials.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = deg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let a = f.last().unwrap().clone();
    if a.abs().is_one() {
        let g = if a.is_negative() {
            f.iter().map(|c| -c).collect()
        } else {
            f.clone()
        };
        return factor_squarefree_monic(&g);
    }
    // Replace f by the monic polynomial a^(n-1) f(y/a) and map factors back
    // through y = a x.
    let monic: ZPoly = f
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == n {
                BigInt::one()
            } else {
                c * a.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    factor_squarefree_monic(&trim(monic))
        .into_iter()
        .map(|g| {
            let back: ZPoly = g
                .iter()
                .enumerate()
                .map(|(i, c)| c * a.pow(i as u32))
                .collect();
            primitive(&trim(back))
        })
        .collect()
}

fn factor_squarefree_monic(f: &ZPoly) -> Vec<ZPoly> {
    let n = deg(f);
    assert!(f.last().unwrap().is_one());
    // Pick a prime where f stays squarefree.
    let (p, modular) = PRIMES
        .iter()
        .find_map(|&p| {
            let fp_poly: fp::FPoly = fp::trim(
                f.iter()
                    .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap())
                    .collect(),
            );
            let d = fp::deriv(&fp_poly, p);
            if d.is_empty() {
                return None;
            }
            let g = fp::gcd(fp_poly.clone(), d, p);
            if deg_f(&g) == 0 {
                Some((p, fp_poly))
            } else {
                None
            }
        })
        .expect("some small prime keeps f squarefree");

    let mod_factors = fp::berlekamp(&modular, p);
    if mod_factors.len() == 1 {
        return vec![f.clone()];
    }

    // Landau–Mignotte style bound on coefficients of any monic factor.
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound: BigInt = (BigInt::one() << (n + 1)) * norm1 * 2;

    // Hensel-lift the full modular factorization pairwise.
    let (mut remaining, modulus) = lift_tree(f, &mod_factors, p, &bound);
    let mut current = f.clone();
    let mut out = Vec::new();

    // Zassenhaus recombination over subsets.
    let mut subset_size = 1;
    'outer: while subset_size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, subset_size) {
            let mut cand = vec![BigInt::one()];
            for &i in &combo {
                cand = zmod_sym(&zmul(&cand, &remaining[i]), &modulus);
            }
            if let Some(cof) = zdiv_exact(&current, &cand) {
                out.push(cand);
                current = cof;
                let keep: Vec<ZPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, f)| f.clone())
                    .collect();
                remaining = keep;
                if deg(&current) == 0 {
                    return out;
                }
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if deg(&current) > 0 {
        out.push(current);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn lift_tree(f: &ZPoly, factors: &[fp::FPoly], p: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    if factors.len() == 1 {
        return (vec![f.clone()], BigInt::from(p) * bound * 2);
    }
    let mid = factors.len() / 2;
    let g0 = factors[..mid]
        .iter()
        .fold(vec![1u64], |acc, fac| fp::mul(&acc, fac, p));
    let h0 = factors[mid..]
        .iter()
        .fold(vec![1u64], |acc, fac| fp::mul(&acc, fac, p));
    let (g, h, modulus) = hensel_pair(f, &g0, &h0, p, bound);
    let (mut gs, _) = lift_tree(&g, &factors[..mid], p, bound);
    let (hs, _) = lift_tree(&h, &factors[mid..], p, bound);
    gs.extend(hs);
    (gs, modulus)
}

/// Polynomial with rational coefficients, little-endian, for the public API.
fn to_zpoly(coeffs: &[Rat]) -> ZPoly {
    let mut den = BigInt::one();
    for c in coeffs {
        den = den.lcm(c.denom());
    }
    trim(
        coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect(),
    )
}

fn to_monic_rat(f: &ZPoly) -> Vec<Rat> {
    let lc = f.last().unwrap().clone();
    f.iter()
        .map(|c| Rat::from_big(c.clone(), lc.clone()))
        .collect()
}

/// Factor a rational polynomial; returns monic irreducible factors with
/// multiplicities, lowest degree first.
pub fn factor_rational_poly(coeffs: &[Rat]) -> Vec<(Vec<Rat>, usize)> {
    let f = to_zpoly(coeffs);
    assert!(deg(&f) >= 1, "constant polynomial");
    let f = primitive(&f);
    // Squarefree split: repeatedly divide by gcd(f, f').
    let mut parts: Vec<(ZPoly, usize)> = Vec::new();
    let mut rest = f;
    let mut mult = 1;
    while deg(&rest) >= 1 {
        let deriv: ZPoly = trim(
            rest.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        );
        let g = zgcd(&rest, &deriv);
        let squarefree = zdiv_exact(&rest, &g).unwrap();
        // factors of `squarefree` appear in rest with multiplicity >= mult;
        // peel one layer.
        parts.push((primitive(&squarefree), mult));
        rest = g;
        mult += 1;
    }
    // Merge: the m-th layer's new factors are those dividing layer m but not m+1.
    let mut out: Vec<(Vec<Rat>, usize)> = Vec::new();
    let mut factored: Vec<(ZPoly, usize)> = Vec::new();
    for (layer, m) in &parts {
        if deg(layer) == 0 {
            continue;
        }
        for irr in factor_squarefree(layer) {
            let irr = if irr.last().unwrap().is_negative() {
                irr.iter().map(|c| -c).collect()
            } else {
                irr
            };
            if let Some(entry) = factored.iter_mut().find(|(f0, _)| f0 == &irr) {
                entry.1 = *m;
            } else {
                factored.push((irr, *m));
            }
        }
    }
    for (irr, m) in factored {
        out.push((to_monic_rat(&irr), m));
    }
    out.sort_by_key(|(f, _)| (f.len(), format!("{f:?}")));
    out
}

fn zgcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    // Euclid over Q, then primitivize; fine at the sizes we deal with.
    if b.is_empty() {
        return primitive(a);
    }
    let ra: Vec<Rat> = a
        .iter()
        .map(|c| Rat::from_big(c.clone(), BigInt::one()))
        .collect();
    let rb: Vec<Rat> = b
        .iter()
        .map(|c| Rat::from_big(c.clone(), BigInt::one()))
        .collect();
    let (mut r0, mut r1) = (ra, rb);
    while !r1.is_empty() {
        let r2 = rat_rem(&r0, &r1);
        r0 = r1;
        r1 = r2;
    }
    primitive(&to_zpoly(&r0))
}

fn rat_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let blc = b.last().unwrap().clone();
    while !r.is_empty() && r.len() >= b.len() {
        let lead = &r.last().unwrap().clone() / &blc;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - (&lead * c);
        }
        while r.last().map(Rat::is_zero).unwrap_or(false) {
            r.pop();
        }
    }
    r
}
