//! Adjunction of algebraic constants and a bounded irreducibility test.
//!
//! The test clears denominators, screens candidate factor degrees with
//! distinct-degree factorization modulo small primes (a factor of degree `k`
//! over ℤ must reduce to a product of modular factors whose degrees sum to
//! `k`), and settles the surviving degrees with Kronecker's interpolation
//! search. Everything is exact, so a `false` answer always comes with a
//! factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::derivation::FormalDerivation;
use super::gcd::gcd;
use super::poly::{generators, MultiPoly};
use super::ratfunc::RatFunc;
use super::FieldError;
use crate::rational::Rational;

/// Highest degree accepted by [`is_irreducible`].
pub const MAX_IRREDUCIBILITY_DEGREE: u32 = 8;

const SCREEN_PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];
const MAX_GOOD_PRIMES: usize = 12;
const MAX_KRONECKER_COMBOS: u64 = 400_000;

/// Extends `d` by a constant `label` that is a root of `minpoly`, with image 0.
///
/// `minpoly` must be irreducible of degree at most
/// [`MAX_IRREDUCIBILITY_DEGREE`]. The adjoined symbol is only a name with a
/// derivation image; no arithmetic in ℚ(α) is offered.
pub fn adjoin_algebraic(minpoly: &MultiPoly, label: &str, d: &FormalDerivation) -> Result<FormalDerivation, FieldError> {
    let var = univariate_var(minpoly)?;
    let deriv = minpoly.partial(var);
    if deriv.is_zero() {
        return Err(FieldError::ZeroFormalDerivative);
    }
    if let Some(factor) = nontrivial_factor(minpoly)? {
        return Err(FieldError::ReducibleMinPoly { factor: factor.to_string() });
    }
    // Irreducible in characteristic 0, hence coprime to p' and p'(α) ≠ 0.
    debug_assert!(gcd(minpoly, &deriv).is_one());
    let note = format!(
        "d({label}) = 0: {label} is a root of p = {minpoly}, so 0 = d(p({label})) = p'({label})*d({label}) \
         with p' = {deriv} and gcd(p, p') = 1"
    );
    d.with_forced_image(label, RatFunc::zero(&generators::<&str>(&[])), note)
}

/// Exact irreducibility over ℚ for univariate polynomials of degree ≤ 8.
pub fn is_irreducible(p: &MultiPoly) -> Result<bool, FieldError> {
    Ok(nontrivial_factor(p)?.is_none())
}

fn univariate_var(p: &MultiPoly) -> Result<usize, FieldError> {
    let used: Vec<usize> = (0..p.gens().len()).filter(|&i| p.uses(i)).collect();
    match used.as_slice() {
        [v] => Ok(*v),
        _ => Err(FieldError::NotUnivariate),
    }
}

/// A monic proper factor of `p`, or `None` when `p` is irreducible.
pub fn nontrivial_factor(p: &MultiPoly) -> Result<Option<MultiPoly>, FieldError> {
    let var = univariate_var(p)?;
    let n = p.degree_in(var);
    if n > MAX_IRREDUCIBILITY_DEGREE {
        return Err(FieldError::Unsupported(format!(
            "irreducibility test for degree {n} (limit {MAX_IRREDUCIBILITY_DEGREE})"
        )));
    }
    if n == 1 {
        return Ok(None);
    }
    let g = gcd(p, &p.partial(var));
    if !g.is_constant() {
        return Ok(Some(g));
    }
    let f = integer_primitive(p, var);
    let to_poly = |c: &[BigInt]| {
        let mut acc = MultiPoly::zero(p.gens());
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                let term = MultiPoly::constant(p.gens(), Rational::from_integer(ck.clone())).shift(var, k as u32);
                acc = acc.add(&term);
            }
        }
        acc.monic()
    };
    if f[0].is_zero() {
        return Ok(Some(to_poly(&[BigInt::zero(), BigInt::one()])));
    }
    let half = (n / 2) as usize;
    let mut possible: Vec<bool> = vec![true; half + 1];
    possible[0] = false;
    let mut good = 0;
    for &pr in &SCREEN_PRIMES {
        if good == MAX_GOOD_PRIMES || !possible.iter().any(|&b| b) {
            break;
        }
        let Some(pattern) = modular_degree_pattern(&f, pr) else { continue };
        good += 1;
        let sums = subset_sums(&pattern, n as usize);
        for (k, slot) in possible.iter_mut().enumerate() {
            *slot = *slot && sums[k];
        }
    }
    for k in (1..=half).filter(|&k| possible[k]) {
        if let Some(factor) = kronecker(&f, k)? {
            return Ok(Some(to_poly(&factor)));
        }
    }
    Ok(None)
}

/// Primitive integer coefficient vector (constant term first, positive leading term).
fn integer_primitive(p: &MultiPoly, var: usize) -> Vec<BigInt> {
    let coeffs: Vec<Rational> = p.coeffs_in(var).iter().map(|c| c.constant_value().unwrap_or_default()).collect();
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    for c in &mut ints {
        *c = &*c * &sign / &g;
    }
    ints
}

fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut can = vec![false; n + 1];
    can[0] = true;
    for &d in parts {
        for s in (d..=n).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

// Dense polynomials modulo a small prime, constant term first.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let q = r[top] * inv % p;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - q * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem_mod(&out, m, p)
}

fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        a.iter_mut().for_each(|c| *c = *c * inv % p);
    }
    a
}

fn div_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        let shift = top - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    trim(q)
}

fn sub_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

/// Degrees of the irreducible factors of `f` modulo `p`, or `None` when `p`
/// divides the leading coefficient or `f` is not squarefree modulo `p`.
fn modular_degree_pattern(f: &[BigInt], p: u64) -> Option<Vec<usize>> {
    let pb = BigInt::from(p);
    let reduced: Vec<u64> = f.iter().map(|c| c.mod_floor(&pb).to_u64().expect("small residue")).collect();
    let g = trim(reduced);
    if g.len() != f.len() {
        return None;
    }
    let deriv: Vec<u64> = g.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    if gcd_mod(&g, &deriv, p).len() != 1 {
        return None;
    }
    let mut pattern = Vec::new();
    let mut g = g;
    let x = vec![0, 1];
    let mut h = rem_mod(&x, &g, p);
    let mut i = 1;
    while g.len() > 2 * i {
        let mut e = p;
        let mut base = h.clone();
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, &g, p);
            }
            base = mul_mod(&base, &base, &g, p);
            e >>= 1;
        }
        h = acc;
        let common = gcd_mod(&g, &sub_mod(&h, &x, p), p);
        let dc = common.len() - 1;
        if dc > 0 {
            pattern.extend(std::iter::repeat_n(i, dc / i));
            g = div_mod(&g, &common, p);
            h = rem_mod(&h, &g, p);
        }
        i += 1;
    }
    if g.len() > 1 {
        pattern.push(g.len() - 1);
    }
    Some(pattern)
}

fn eval_int(f: &[BigInt], a: i64) -> BigInt {
    let a = BigInt::from(a);
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &a + c)
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Positive divisors of `v`, or `None` when `v` is out of trial-division reach.
fn divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    let mut rest = v.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut q = 2u64;
    while q <= TRIAL_LIMIT {
        let qb = BigInt::from(q);
        if &qb * &qb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 {
            factors.push((qb, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let lim = BigInt::from(TRIAL_LIMIT);
        if rest > &lim * &lim {
            return None;
        }
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (pr, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut m = d.clone();
            for _ in 0..=e {
                next.push(m.clone());
                m *= &pr;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

/// Integer factor of degree exactly `k` of the primitive polynomial `f`, found
/// by interpolating through divisors of `f` at `k + 1` integer points.
fn kronecker(f: &[BigInt], k: usize) -> Result<Option<Vec<BigInt>>, FieldError> {
    let mut candidates: Vec<(usize, i64, Vec<BigInt>)> = Vec::new();
    for step in 0..24i64 {
        let a = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        let v = eval_int(f, a);
        if v.is_zero() {
            return Ok(Some(vec![BigInt::from(-a), BigInt::one()]));
        }
        if let Some(divs) = divisors(&v) {
            candidates.push((divs.len(), a, divs));
        }
    }
    if candidates.len() < k + 1 {
        return Err(FieldError::Unsupported("interpolation points out of factoring reach".into()));
    }
    candidates.sort_by_key(|c| c.0);
    candidates.truncate(k + 1);
    let points: Vec<i64> = candidates.iter().map(|c| c.1).collect();
    let mut combos: u64 = 1;
    for (i, c) in candidates.iter().enumerate() {
        combos = combos.saturating_mul(c.0 as u64 * if i == 0 { 1 } else { 2 });
    }
    if combos > MAX_KRONECKER_COMBOS {
        return Err(FieldError::Unsupported(format!("Kronecker search with {combos} combinations")));
    }

    // Lagrange basis scaled to a common integer denominator.
    let basis: Vec<Vec<Rational>> = (0..=k).map(|i| lagrange_basis(&points, i)).collect();
    let den = basis.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ibasis: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|b| b.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let lead = f.last().expect("nonempty").clone();
    let constant = f[0].clone();

    let choices: Vec<Vec<BigInt>> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut v = c.2.clone();
            if i > 0 {
                v.extend(c.2.iter().map(|d| -d));
            }
            v
        })
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let mut g = vec![BigInt::zero(); k + 1];
        for (i, choice) in idx.iter().enumerate() {
            let b = &choices[i][*choice];
            for (j, c) in ibasis[i].iter().enumerate() {
                g[j] += b * c;
            }
        }
        if g.iter().all(|c| c.is_multiple_of(&den)) {
            let g: Vec<BigInt> = g.into_iter().map(|c| c / &den).collect();
            if !g[k].is_zero()
                && lead.is_multiple_of(&g[k])
                && !g[0].is_zero()
                && constant.is_multiple_of(&g[0])
                && divides(f, &g)
            {
                return Ok(Some(g));
            }
        }
        let mut pos = 0;
        loop {
            if pos > k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn lagrange_basis(points: &[i64], i: usize) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    let mut scale = Rational::one();
    for (j, &xj) in points.iter().enumerate() {
        if j == i {
            continue;
        }
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (m, c) in poly.iter().enumerate() {
            next[m + 1] += c;
            next[m] -= c * Rational::from_integer(BigInt::from(xj));
        }
        poly = next;
        scale *= Rational::from_integer(BigInt::from(points[i] - xj));
    }
    poly.into_iter().map(|c| c / &scale).collect()
}

fn divides(f: &[BigInt], g: &[BigInt]) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lg = &g[dg];
    while r.len() > dg {
        let top = r.len() - 1;
        if !r[top].is_multiple_of(lg) {
            return false;
        }
        let q = &r[top] / lg;
        let shift = top - dg;
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] -= &q * gi;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratfunc;

    fn poly(s: &str) -> MultiPoly {
        parse_ratfunc(s).unwrap().num().clone()
    }

    #[test]
    fn irreducible_examples() {
        for s in ["x^2 - 2", "x^3 - x - 1", "x - 5", "x^4 + 1", "x^8 - x - 1", "x^8 + 2", "x^6 + x^3 + 1", "1/2*x^2 + 1/3"] {
            assert!(is_irreducible(&poly(s)).unwrap(), "{s}");
        }
    }

    #[test]
    fn reducible_examples() {
        for s in [
            "x^2 - 4",
            "x^4 + 4",
            "x^8 + x + 1",
            "(x^2 + x + 1)*(x^2 + 2)",
            "(x^3 + 2)*(x^3 - 3*x + 7)",
            "(x^4 + x + 3)*(x^4 - 2*x^3 + 5)",
            "x^3 - x",
            "(x + 1)^2*(x^2 + 1)",
        ] {
            let p = poly(s);
            let factor = nontrivial_factor(&p).unwrap().expect(s);
            assert!(factor.total_degree() >= 1 && factor.total_degree() < p.total_degree(), "{s}");
            assert!(p.div_exact(&factor).is_some(), "{s}: {factor}");
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(is_irreducible(&poly("x^9 + 1")), Err(FieldError::Unsupported(_))));
        assert!(matches!(is_irreducible(&poly("x*y + 1")), Err(FieldError::NotUnivariate)));
        assert!(matches!(is_irreducible(&poly("3")), Err(FieldError::NotUnivariate)));
    }

    #[test]
    fn adjunction() {
        let d = FormalDerivation::new([("t".to_string(), parse_ratfunc("1").unwrap())]).unwrap();
        for s in ["x^2 - 2", "x^3 - x - 1", "x - 5"] {
            let e = adjoin_algebraic(&poly(s), "alpha", &d).unwrap();
            assert!(e.image("alpha").unwrap().is_zero());
            assert_eq!(e.provenance().len(), 1);
            let f = parse_ratfunc("alpha^2*t + alpha").unwrap();
            assert_eq!(e.apply(&f).unwrap(), parse_ratfunc("alpha^2").unwrap());
        }
        assert!(matches!(
            adjoin_algebraic(&poly("x^2 - 1"), "alpha", &d),
            Err(FieldError::ReducibleMinPoly { .. })
        ));
        assert!(matches!(adjoin_algebraic(&poly("x^2 - 2"), "t", &d), Err(FieldError::DuplicateGenerator(_))));
    }
}
