use std::collections::BTreeMap;
use std::fmt;

use super::poly::{generators, merge_generators, MultiPoly};
use super::ratfunc::RatFunc;
use super::FieldError;

/// A derivation on a finitely generated rational-function field, fixed by the
/// images of its generators. Rational constants carry no generator, so the
/// derivation vanishes on them by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalDerivation {
    field_generators: Vec<String>,
    images: BTreeMap<String, RatFunc>,
    provenance: Vec<String>,
}

impl FormalDerivation {
    /// Builds the derivation from `(generator, image)` pairs. Every image must
    /// live in the field spanned by the listed generators.
    pub fn new(images: impl IntoIterator<Item = (String, RatFunc)>) -> Result<Self, FieldError> {
        let mut map = BTreeMap::new();
        for (g, img) in images {
            if map.insert(g.clone(), img).is_some() {
                return Err(FieldError::DuplicateGenerator(g));
            }
        }
        let field_generators: Vec<String> = map.keys().cloned().collect();
        for img in map.values() {
            if let Some(g) = img.used_generators().into_iter().find(|g| !map.contains_key(g)) {
                return Err(FieldError::UnknownGenerator(g));
            }
        }
        Ok(FormalDerivation { field_generators, images: map, provenance: Vec::new() })
    }

    pub fn field_generators(&self) -> &[String] {
        &self.field_generators
    }

    pub fn image(&self, generator: &str) -> Option<&RatFunc> {
        self.images.get(generator)
    }

    pub fn images(&self) -> impl Iterator<Item = (&String, &RatFunc)> {
        self.images.iter()
    }

    /// Justifications recorded for generators whose image was forced.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub(crate) fn with_forced_image(&self, generator: &str, image: RatFunc, note: String) -> Result<Self, FieldError> {
        if self.images.contains_key(generator) {
            return Err(FieldError::DuplicateGenerator(generator.to_string()));
        }
        let mut out = self.clone();
        out.images.insert(generator.to_string(), image);
        out.field_generators = out.images.keys().cloned().collect();
        out.provenance.push(note);
        Ok(out)
    }

    /// `d(f) = Σ ∂f/∂g · d(g)` over the generators of `f`.
    pub fn apply(&self, f: &RatFunc) -> Result<RatFunc, FieldError> {
        let used = f.used_generators();
        if let Some(g) = used.iter().find(|g| !self.images.contains_key(*g)) {
            return Err(FieldError::UnknownGenerator(g.clone()));
        }
        let mut gens = merge_generators(f.gens(), &generators(&self.field_generators));
        for img in self.images.values() {
            gens = merge_generators(&gens, img.gens());
        }
        let f = f.embed(&gens);
        let (n, d) = (f.num(), f.den());

        // Numerator of d(n/d)·d² as Σ_g (∂n·d − n·∂d)·img(g).
        let mut poly_part = MultiPoly::zero(&gens);
        let mut frac_part: Option<RatFunc> = None;
        for name in &used {
            let var = gens.iter().position(|x| x == name).expect("generator present");
            let top = n.partial(var).mul(d).sub(&n.mul(&d.partial(var)));
            if top.is_zero() {
                continue;
            }
            let img = self.images[name].embed(&gens);
            if img.is_zero() {
                continue;
            }
            if img.is_polynomial() {
                poly_part = poly_part.add(&top.mul(img.num()));
                poly_part.check_size()?;
            } else {
                let term = RatFunc::from_poly(top).mul(&img)?;
                frac_part = Some(match frac_part {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
        }
        let d2 = d.mul(d);
        let mut result = RatFunc::new(poly_part, d2.clone())?;
        if let Some(extra) = frac_part {
            result = result.add(&extra.div(&RatFunc::from_poly(d2))?)?;
        }
        Ok(result)
    }
}

impl fmt::Display for FormalDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|(g, img)| format!("d({g}) = {img}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    fn d(pairs: &[(&str, &str)]) -> FormalDerivation {
        FormalDerivation::new(pairs.iter().map(|(g, e)| (g.to_string(), rf(e)))).unwrap()
    }

    #[test]
    fn unit_derivation_examples() {
        let dt = d(&[("t", "1")]);
        assert_eq!(dt.apply(&rf("t^2")).unwrap(), rf("2*t"));
        assert_eq!(dt.apply(&rf("1/t")).unwrap(), rf("-1/t^2"));
        assert!(dt.apply(&rf("7/3")).unwrap().is_zero());
    }

    #[test]
    fn two_generator_example() {
        // d(a^2 b + b^3) = 2ab·d(a) + (a^2 + 3b^2)·d(b) = 2ab when d(a)=1, d(b)=0.
        let dab = d(&[("a", "1"), ("b", "0")]);
        assert_eq!(dab.apply(&rf("a^2*b + b^3")).unwrap(), rf("2*a*b"));
    }

    #[test]
    fn rational_images() {
        let dt = d(&[("t", "1/t")]);
        // d(t^2) = 2t · (1/t) = 2
        assert_eq!(dt.apply(&rf("t^2")).unwrap(), rf("2"));
        let mixed = d(&[("s", "s"), ("t", "1/(s + t)")]);
        let got = mixed.apply(&rf("s*t")).unwrap();
        assert_eq!(got, rf("s*t + s/(s + t)"));
    }

    #[test]
    fn errors() {
        let dt = d(&[("t", "1")]);
        assert!(matches!(dt.apply(&rf("u*t")), Err(FieldError::UnknownGenerator(g)) if g == "u"));
        assert!(matches!(
            FormalDerivation::new([("t".to_string(), rf("u"))]),
            Err(FieldError::UnknownGenerator(_))
        ));
        assert!(matches!(
            FormalDerivation::new([("t".to_string(), rf("1")), ("t".to_string(), rf("2"))]),
            Err(FieldError::DuplicateGenerator(_))
        ));
    }
}
