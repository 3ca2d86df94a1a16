use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::Q;

/// Greatest common divisor, normalized to integer-primitive form with a positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Polynomial::one();
    }
    let va = a.used_vars();
    let vb = b.used_vars();
    // A variable present in only one argument cannot occur in a common factor.
    if let Some(x) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, x), b);
    }
    if let Some(x) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, x));
    }
    let x = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap()
        .clone();
    if let Some(h) = heuristic_gcd(&a.primitive(), &b.primitive(), &x) {
        return h;
    }
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let g = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&x) < q.degree_in(&x) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, &x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&x) == 0 {
            q = Polynomial::one();
            break;
        }
        p = q;
        q = primitive_in(&r, &x);
    }
    (&g * &primitive_in(&q, &x)).primitive()
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Positive integer content of an integer polynomial.
fn integer_content(p: &Polynomial) -> BigInt {
    p.terms()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Rebuilds a polynomial in `x` from its image at `x = xi` using balanced base-`xi` digits.
fn interpolate(h: &Polynomial, x: &str, xi: &BigInt) -> Polynomial {
    let half = xi / 2;
    let mut out = Polynomial::zero();
    for (e, c) in h.terms() {
        let mono = Polynomial::from_terms(h.vars().to_vec(), [(e.clone(), Q::one())]).unwrap();
        let mut n = c.numer().clone();
        let mut k = 0u32;
        while !n.is_zero() {
            let mut r = n.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                out = &out + &mono.shift(x, k).scale(&Q::from_integer(r.clone()));
            }
            n = (n - r) / xi;
            k += 1;
        }
    }
    out
}

/// Heuristic gcd of integer-primitive polynomials by evaluation at a large integer,
/// recursive gcd of the images and balanced-digit interpolation. Every candidate is
/// confirmed by exact division; `None` means fall back to the remainder sequence.
fn heuristic_gcd(f: &Polynomial, g: &Polynomial, x: &str) -> Option<Polynomial> {
    let fnorm = max_norm(f);
    let gnorm = max_norm(g);
    let b: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + BigInt::from(29);
    let lf = f.leading_term()?.1.numer().abs();
    let lg = g.leading_term()?.1.numer().abs();
    let mut xi = b
        .clone()
        .min(BigInt::from(99) * b.sqrt())
        .max(BigInt::from(2) * (fnorm / lf).min(gnorm / lg) + 2);
    for _ in 0..6 {
        let at = Polynomial::constant(Q::from_integer(xi.clone()));
        let ff = f.subst(x, &at);
        let gg = g.subst(x, &at);
        if !ff.is_zero() && !gg.is_zero() {
            let scale = integer_content(&ff).gcd(&integer_content(&gg));
            let h = gcd(&ff, &gg).scale(&Q::from_integer(scale));
            let candidates = [
                Some(interpolate(&h, x, &xi)),
                ff.div_exact(&h)
                    .map(|cf| interpolate(&cf, x, &xi))
                    .and_then(|cf| f.div_exact(&cf)),
                gg.div_exact(&h)
                    .map(|cg| interpolate(&cg, x, &xi))
                    .and_then(|cg| g.div_exact(&cg)),
            ];
            for cand in candidates.into_iter().flatten() {
                if cand.is_zero() {
                    continue;
                }
                let cand = cand.primitive();
                if f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                    return Some(cand);
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Polynomial, x: &str) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in p.coeffs_in(x) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.as_constant().is_some() {
            return Polynomial::one();
        }
    }
    g
}

/// `p` divided by its content in `x`.
pub fn primitive_in(p: &Polynomial, x: &str) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Pseudo-remainder of `p` by `q` in the variable `x`.
pub fn pseudo_remainder(p: &Polynomial, q: &Polynomial, x: &str) -> Polynomial {
    let dq = q.degree_in(x);
    let lq = q.coeff_of(x, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(x) >= dq {
        let dr = r.degree_in(x);
        let lr = r.coeff_of(x, dr);
        r = &(&lq * &r) - &(&lr * &q.shift(x, dr - dq));
    }
    r
}
