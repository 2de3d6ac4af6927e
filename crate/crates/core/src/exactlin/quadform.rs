//! Isotropy of ternary quadratic forms over Q, used to distinguish a split
//! matrix algebra M_2(Q) from a rational quaternion division algebra when
//! analysing commutants of invariant-subspace lattices.

use super::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Decision for `a x^2 + b y^2 + c z^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ternary {
    /// A nontrivial rational zero, mapped back to the original coordinates.
    Isotropic(Vec<Rat>),
    /// No nontrivial rational zero exists.
    Anisotropic,
    /// Coefficients too large for the bounded search; treated conservatively
    /// by callers.
    TooLarge,
}

fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    // n = s * t^2 with s squarefree; returns (s, t). Trial division, desk scale.
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m = &m / &d;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &d;
        }
        for _ in 0..(e / 2) {
            t *= &d;
        }
        d += 1;
    }
    s *= &m;
    if neg {
        s = -s;
    }
    (s, t)
}

/// Decide whether `a x^2 + b y^2 + c z^2` has a nontrivial rational zero and
/// produce one. Complete for coefficients of desk scale: after reduction to
/// the squarefree pairwise-coprime case, a solution exists within the Holzer
/// bound, which the search exhausts.
pub fn ternary_isotropic_vector(a: &Rat, b: &Rat, c: &Rat) -> Ternary {
    assert!(!a.is_zero() && !b.is_zero() && !c.is_zero());
    // Clear denominators and square parts; track the substitution back.
    let mut coeff = Vec::new();
    let mut scale = Vec::new();
    for r in [a, b, c] {
        let int = r.numer() * r.denom(); // same squareclass as r
        let (s, t) = squarefree_part(&int);
        // r * x^2 = s * (x * t / denom)^2 scaled: substitute x -> denom x / t.
        coeff.push(s);
        scale.push(Rat::from_big(r.denom().clone(), BigInt::one()) / Rat::from_big(t, BigInt::one()));
    }
    // Remove common factors pairwise: if d | a,b then replace c by c*d after
    // substituting z -> z/d; iterate to pairwise coprimality.
    let mut subst: [Rat; 3] = [scale[0].clone(), scale[1].clone(), scale[2].clone()];
    let mut co: [BigInt; 3] = [coeff[0].clone(), coeff[1].clone(), coeff[2].clone()];
    loop {
        let mut changed = false;
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let d = co[i].gcd(&co[j]).abs();
            if d > BigInt::one() {
                co[i] = &co[i] / &d;
                co[j] = &co[j] / &d;
                co[k] = &co[k] * &d;
                // dividing the equation by d rescales the k-th variable by d
                subst[k] = subst[k].clone() * Rat::from_big(d.clone(), BigInt::one());
                let (s, t) = squarefree_part(&co[k].clone());
                co[k] = s;
                subst[k] = subst[k].clone() / Rat::from_big(t, BigInt::one());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let signs: Vec<bool> = co.iter().map(|x| x.is_positive()).collect();
    if signs.iter().all(|&s| s) || signs.iter().all(|&s| !s) {
        return Ternary::Anisotropic;
    }

    // Holzer: a solution, if any, exists with |x| <= sqrt|bc| etc.
    let bx = sqrt_ceil(&(co[1].clone() * &co[2]).abs());
    let by = sqrt_ceil(&(co[0].clone() * &co[2]).abs());
    let budget: BigInt = (&bx + 1) * (&by + 1);
    if budget > BigInt::from(4_000_000u64) {
        return Ternary::TooLarge;
    }
    let bx: i64 = bx.try_into().unwrap();
    let by: i64 = by.try_into().unwrap();
    for x in 0..=bx {
        for y in -by..=by {
            if x == 0 && y <= 0 {
                continue;
            }
            // a x^2 + b y^2 + c z^2 = 0 -> z^2 = -(a x^2 + b y^2)/c
            let num = -(co[0].clone() * x * x + co[1].clone() * y * y);
            let (q, r) = num.div_rem(&co[2]);
            if !r.is_zero() || q.is_negative() {
                continue;
            }
            let z = sqrt_ceil(&q);
            if &z * &z == q {
                let sol = [BigInt::from(x), BigInt::from(y), z];
                let back: Vec<Rat> = (0..3)
                    .map(|i| Rat::from_big(sol[i].clone(), BigInt::one()) * subst[i].clone())
                    .collect();
                return Ternary::Isotropic(back);
            }
        }
    }
    Ternary::Anisotropic
}

fn sqrt_ceil(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    let r = n.sqrt();
    if &(&r * &r) < n {
        r + 1
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn eval(a: &Rat, b: &Rat, c: &Rat, v: &[Rat]) -> Rat {
        a * &(&v[0] * &v[0]) + (b * &(&v[1] * &v[1])) + (c * &(&v[2] * &v[2]))
    }

    #[test]
    fn isotropic_split_form() {
        // x^2 + y^2 - 2z^2 = 0 has (1,1,1)
        let (a, b, c) = (r(1), r(1), r(-2));
        match ternary_isotropic_vector(&a, &b, &c) {
            Ternary::Isotropic(v) => {
                assert!(eval(&a, &b, &c, &v).is_zero());
                assert!(v.iter().any(|x| !x.is_zero()));
            }
            other => panic!("expected isotropic, got {other:?}"),
        }
    }

    #[test]
    fn anisotropic_quaternion_form() {
        // x^2 + y^2 + z^2 definite; x^2 + y^2 - 3 z^2 fails 3-adically
        assert_eq!(
            ternary_isotropic_vector(&r(1), &r(1), &r(1)),
            Ternary::Anisotropic
        );
        assert_eq!(
            ternary_isotropic_vector(&r(1), &r(1), &r(-3)),
            Ternary::Anisotropic
        );
    }

    #[test]
    fn square_parts_absorbed() {
        // 4x^2 + 9y^2 - 13 z^2: (1/2? ..) solution of u^2 + v^2 = 13 w^2 is (2,3,1)
        let (a, b, c) = (r(4), r(9), r(-13));
        match ternary_isotropic_vector(&a, &b, &c) {
            Ternary::Isotropic(v) => assert!(eval(&a, &b, &c, &v).is_zero()),
            other => panic!("expected isotropic, got {other:?}"),
        }
    }

    #[test]
    fn rational_coefficients() {
        let (a, b, c) = (Rat::new(1, 2), Rat::new(-1, 3), r(-1));
        // x^2/2 - y^2/3 - z^2: try (sqrt?) -> 3x^2 - 2y^2 - 6z^2 = 0 has (2, 3/... )
        match ternary_isotropic_vector(&a, &b, &c) {
            Ternary::Isotropic(v) => assert!(eval(&a, &b, &c, &v).is_zero()),
            Ternary::Anisotropic => {} // fine if genuinely anisotropic
            Ternary::TooLarge => panic!("unexpected size blowup"),
        }
    }
}
