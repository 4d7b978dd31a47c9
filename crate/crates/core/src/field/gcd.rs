//! Multivariate gcd over the rationals. Generators are eliminated one at a
//! time: a cheap specialization test proves most pairs coprime in the main
//! variable, and the rest go through a subresultant pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use crate::rational::{int, Rational};

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.gens() != b.gens() {
        let g = super::poly::merge_generators(a.gens(), b.gens());
        return gcd(&a.embed(&g), &b.embed(&g));
    }
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.gens());
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    let n = a.gens().len();
    // A generator used by only one side cannot occur in the gcd.
    for v in 0..n {
        match (a.uses(v), b.uses(v)) {
            (true, false) => return gcd(&content_in(a, v), b),
            (false, true) => return gcd(a, &content_in(b, v)),
            _ => {}
        }
    }
    let mut vars: Vec<usize> = (0..n).filter(|&i| a.uses(i)).collect();
    vars.sort_by_key(|&i| (a.degree_in(i).max(b.degree_in(i)), i));
    for &v in &vars {
        if coprime_in(a, b, v) {
            return gcd(&content_in(a, v), &content_in(b, v));
        }
    }
    if let Some(g) = heuristic_gcd(&integral(a), &integral(b), &vars, 0) {
        return g.monic();
    }
    let var = vars[0];
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let p = primitive_gcd(pa, pb, var);
    c.mul(&p).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `gens[var]`.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| (c.len(), c.total_degree()));
    let mut acc = MultiPoly::zero(p.gens());
    for c in coeffs {
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.gens());
        }
    }
    acc.monic()
}

pub fn primitive_part_in(p: &MultiPoly, var: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` in `gens[var]`.
pub fn prem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let db = b.degree_in(var);
    let da = a.degree_in(var);
    if a.is_zero() || da < db {
        return a.clone();
    }
    let lcb = b.coeff_in(var, db);
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r.coeff_in(var, dr);
        r = r.mul(&lcb).sub(&b.shift(var, dr - db).mul(&lcr));
        steps += 1;
    }
    let missing = da - db + 1 - steps;
    if missing > 0 {
        r = r.mul(&lcb.pow(missing));
    }
    r
}

/// Dense univariate coefficients, lowest degree first.
type Dense = Vec<Rational>;

fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// `p` with every generator except `var` replaced by `point[i]`.
fn specialize(p: &MultiPoly, var: usize, point: &[Rational]) -> Dense {
    let mut out = vec![Rational::zero(); p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != var && e > 0 {
                v *= num_traits::pow(point[i].clone(), e as usize);
            }
        }
        out[m.exponents()[var] as usize] += v;
    }
    trim(&mut out);
    out
}

fn dense_rem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let k = r.last().expect("nonempty").clone() / &lb;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &k * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn dense_gcd_degree(mut a: Dense, mut b: Dense) -> usize {
    while !b.is_empty() {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Exact sufficient test for `gcd(a, b)` having degree 0 in `gens[var]`.
///
/// At a point where neither leading coefficient vanishes, the image of the
/// gcd keeps its degree and divides both images, so a constant image gcd
/// bounds the true degree by 0.
fn coprime_in(a: &MultiPoly, b: &MultiPoly, var: usize) -> bool {
    let n = a.gens().len();
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    for attempt in 0..3i64 {
        let point: Vec<Rational> = (0..n as i64).map(|i| int(2 + 3 * i + 7 * attempt)).collect();
        let sa = specialize(a, var, &point);
        let sb = specialize(b, var, &point);
        if sa.len() != da as usize + 1 || sb.len() != db as usize + 1 {
            continue;
        }
        return dense_gcd_degree(sa, sb) == 0;
    }
    false
}

/// `p` scaled to primitive integer coefficients.
fn integral(p: &MultiPoly) -> MultiPoly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    p.scale(&Rational::new(den, num))
}

fn int_content(p: &MultiPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// `p` with `gens[var]` set to `xi`.
fn eval_at(p: &MultiPoly, var: usize, xi: &BigInt) -> MultiPoly {
    let gens = p.gens().clone();
    MultiPoly::from_monomials(
        &gens,
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            let k = std::mem::take(&mut e[var]);
            (Monomial(e), c * Rational::from_integer(num_traits::pow(xi.clone(), k as usize)))
        }),
    )
}

/// Inverse of [`eval_at`] for small coefficients: expands every integer
/// coefficient of `h` in balanced base `xi`, digit `i` going to `gens[var]^i`.
fn interpolate(h: &MultiPoly, var: usize, xi: &BigInt) -> MultiPoly {
    let half = xi / 2;
    let mut terms = Vec::new();
    for (m, c) in h.terms() {
        let mut v = c.numer().clone();
        let mut i = 0;
        while !v.is_zero() {
            let mut r = v.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                let mut e = m.exponents().to_vec();
                e[var] = i;
                terms.push((Monomial(e), Rational::from_integer(r.clone())));
            }
            v = (v - r) / xi;
            i += 1;
        }
    }
    MultiPoly::from_monomials(h.gens(), terms)
}

/// Heuristic gcd of integer polynomials: evaluate `vars[depth]` at a large
/// integer, recurse, rebuild by balanced expansion and keep the candidate
/// only if it divides both inputs. With `xi > 2·min(|a|, |b|) + 1` a
/// dividing candidate is the gcd. `None` asks for the exact fallback.
fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly, vars: &[usize], depth: usize) -> Option<MultiPoly> {
    if depth == vars.len() {
        let x = a.constant_value()?;
        let y = b.constant_value()?;
        return Some(MultiPoly::constant(a.gens(), Rational::from_integer(x.numer().gcd(y.numer()))));
    }
    let (ca, cb) = (int_content(a), int_content(b));
    let c = Rational::from_integer(ca.gcd(&cb));
    let a = &a.scale(&Rational::from_integer(ca).recip());
    let b = &b.scale(&Rational::from_integer(cb).recip());
    let var = vars[depth];
    let bound = max_norm(a).min(max_norm(b));
    let mut xi: BigInt = bound * 2u32 + 29u32;
    for _ in 0..6 {
        let ea = eval_at(a, var, &xi);
        let eb = eval_at(b, var, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(h) = heuristic_gcd(&ea, &eb, vars, depth + 1) {
                let g = integral(&interpolate(&h, var, &xi));
                if !g.is_zero() && a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                    return Some(g.scale(&c));
                }
            }
        }
        xi = xi * 73794u32 / 27011u32 + 1u32;
    }
    None
}

/// Subresultant sequence for `a`, `b` primitive in `gens[var]`.
fn primitive_gcd(a: MultiPoly, b: MultiPoly, var: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    if b.is_zero() {
        return primitive_part_in(&a, var);
    }
    let mut g = MultiPoly::one(a.gens());
    let mut h = MultiPoly::one(a.gens());
    loop {
        if b.degree_in(var) == 0 {
            return MultiPoly::one(a.gens());
        }
        let delta = a.degree_in(var) - b.degree_in(var);
        let r = prem(&a, &b, var);
        if r.is_zero() {
            return primitive_part_in(&b, var);
        }
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.coeff_in(var, a.degree_in(var));
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratfunc;

    fn poly(s: &str) -> MultiPoly {
        let r = parse_ratfunc(s).unwrap();
        assert!(r.den().is_one());
        r.num().clone()
    }

    #[test]
    fn univariate() {
        let g = gcd(&poly("t^2 - 1"), &poly("t^2 + 2*t + 1"));
        assert_eq!(g, poly("t + 1"));
        let g = gcd(&poly("t^3 - t - 1"), &poly("3*t^2 - 1"));
        assert!(g.is_one());
    }

    #[test]
    fn multivariate() {
        let a = poly("(x + y)*(x - 2*y + z)^2");
        let b = poly("(x + y)*(x - 2*y + z)*(z^2 + 1)");
        let expected = poly("(x + y)*(x - 2*y + z)");
        assert_eq!(gcd(&a, &b), expected.monic());
        let c = poly("x*y + 1");
        assert!(gcd(&c, &poly("x - y")).is_one());
    }

    #[test]
    fn content_extraction() {
        let p = poly("x^2*y + x*y");
        // In x: coefficients y and y, content y.
        let x = p.gens().iter().position(|g| g == "x").unwrap();
        assert_eq!(content_in(&p, x), poly("y").embed(p.gens()));
        assert_eq!(gcd(&p, &poly("y^2")).embed(p.gens()), poly("y").embed(p.gens()));
    }
}
