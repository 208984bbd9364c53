//! Matrices in `SL_2(Z)` and coset enumeration for `Gamma_0(n)`.

use crate::arith::{euclid_dedekind, mod_inverse, Rat};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_integer::Integer;
use std::fmt;

/// An integer matrix `(a, b; c, d)` of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if (a as i128) * (d as i128) - (b as i128) * (c as i128) != 1 {
            return Err(Error::InvalidInput(format!("({a},{b};{c},{d}) has determinant != 1")));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub const fn identity() -> Self {
        GroupElement { a: 1, b: 0, c: 0, d: 1 }
    }

    pub const fn minus_identity() -> Self {
        GroupElement { a: -1, b: 0, c: 0, d: -1 }
    }

    /// `S = (0, -1; 1, 0)`.
    pub const fn s() -> Self {
        GroupElement { a: 0, b: -1, c: 1, d: 0 }
    }

    /// `T^k = (1, k; 0, 1)`.
    pub const fn t_pow(k: i64) -> Self {
        GroupElement { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c == 0
    }

    /// `c tau + d`.
    #[inline]
    pub fn cocycle(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// `Gamma_0(level)` with width `width` at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub level: i64,
    pub width: i64,
}

impl GroupSpec {
    pub fn gamma0(level: i64) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidInput(format!("level must be positive, got {level}")));
        }
        Ok(GroupSpec { level, width: 1 })
    }

    /// Parses `gamma0:<n>`.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s
            .trim()
            .strip_prefix("gamma0:")
            .ok_or_else(|| Error::Parse(format!("expected gamma0:<n>, got {s:?}")))?;
        let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
        GroupSpec::gamma0(n)
    }

    pub fn name(&self) -> String {
        format!("gamma0:{}", self.level)
    }
}

/// Canonical representative `(a, b; c, d)` with `c > 0`, `0 <= d < c`, `a = d^{-1} mod c` in `[0, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DoubleCosetRep {
    pub c: i64,
    pub d: i64,
    pub a: i64,
    pub b: i64,
}

impl DoubleCosetRep {
    /// Canonical completion of the lower row `(c, d)`, `c > 0`, `gcd(c, d) = 1`.
    pub fn new(c: i64, d: i64) -> Result<Self> {
        if c <= 0 {
            return Err(Error::InvalidInput(format!("double coset rep needs c > 0, got {c}")));
        }
        let d = d.rem_euclid(c);
        let a = mod_inverse(d, c)?;
        Ok(DoubleCosetRep { c, d, a, b: (a * d - 1) / c })
    }

    pub fn element(&self) -> GroupElement {
        GroupElement { a: self.a, b: self.b, c: self.c, d: self.d }
    }
}

/// Whether `g` has determinant one and lies in `Gamma_0(n)`.
pub fn contains(spec: &GroupSpec, g: &GroupElement) -> bool {
    (g.a as i128) * (g.d as i128) - (g.b as i128) * (g.c as i128) == 1 && g.c % spec.level == 0
}

/// `(g tau, (c tau + d)^{-2})`.
pub fn moebius_and_j(g: &GroupElement, tau: Complex64) -> (Complex64, Complex64) {
    let den = g.cocycle(tau);
    let image = (tau * g.a as f64 + g.b as f64) / den;
    (image, (den * den).inv())
}

/// The cusp `g(infinity)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cusp {
    Infinity,
    Rational(Rat),
}

pub fn cusp_image(g: &GroupElement) -> Cusp {
    if g.c == 0 {
        Cusp::Infinity
    } else {
        Cusp::Rational(Rat::new(g.a, g.c))
    }
}

/// One element per right coset of `Gamma_infinity` in the box `|c| < K`, `|d| < K^2`.
///
/// `-I` is folded into the coset, so only `c > 0` is enumerated besides the identity.
pub fn coset_reps_box(spec: &GroupSpec, k: f64) -> Vec<GroupElement> {
    let mut out = vec![GroupElement::identity()];
    let k2 = k * k;
    let mut c = spec.level;
    while (c as f64) < k {
        let dmax = d_bound(k2);
        for d in -dmax..=dmax {
            if d.gcd(&c) != 1 {
                continue;
            }
            let e = euclid_dedekind(d.rem_euclid(c), c);
            let a = e.inverse.rem_euclid(c);
            out.push(GroupElement { a, b: (a * d - 1) / c, c, d });
        }
        c += spec.level;
    }
    out
}

/// Largest integer strictly below `k2` in absolute value.
pub(crate) fn d_bound(k2: f64) -> i64 {
    let f = k2.ceil() as i64 - 1;
    f.max(0)
}

/// All canonical representatives at the single modulus `c`.
pub fn reps_at(spec: &GroupSpec, c: i64) -> Result<Vec<DoubleCosetRep>> {
    if c <= 0 || c % spec.level != 0 {
        return Err(Error::InvalidInput(format!("modulus {c} is not a positive multiple of {}", spec.level)));
    }
    let mut v = Vec::new();
    for d in 0..c {
        let e = euclid_dedekind(d, c);
        if e.gcd != 1 {
            continue;
        }
        let a = e.inverse.rem_euclid(c);
        v.push(DoubleCosetRep { c, d, a, b: (a * d - 1) / c });
    }
    Ok(v)
}

/// Canonical double coset representatives with `0 < c <= c_max`, grouped by `c`.
pub fn double_coset_reps(spec: &GroupSpec, c_max: i64) -> Vec<(i64, Vec<DoubleCosetRep>)> {
    (1..=c_max / spec.level)
        .map(|m| {
            let c = m * spec.level;
            (c, reps_at(spec, c).expect("valid modulus"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn contains_examples() {
        let g2 = GroupSpec::gamma0(2).unwrap();
        assert!(contains(&g2, &GroupElement::new(1, 0, 2, 1).unwrap()));
        assert!(!contains(&g2, &GroupElement::s()));
        let g1 = GroupSpec::gamma0(1).unwrap();
        assert!(contains(&g1, &GroupElement::new(3, 1, 2, 1).unwrap()));
        assert!(GroupElement::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn moebius_examples() {
        let tau = Complex64::new(0.3, 1.7);
        let (im, j) = moebius_and_j(&GroupElement::identity(), tau);
        assert_eq!((im, j), (tau, Complex64::new(1.0, 0.0)));
        let i = Complex64::new(0.0, 1.0);
        let (im, j) = moebius_and_j(&GroupElement::s(), i);
        assert!((im - i).norm() < 1e-15);
        assert!((j + 1.0).norm() < 1e-15);
        let (im, j) = moebius_and_j(&GroupElement::t_pow(1), tau);
        assert!((im - tau - 1.0).norm() < 1e-15);
        assert!((j - 1.0).norm() < 1e-15);
    }

    #[test]
    fn box_examples() {
        let g1 = GroupSpec::gamma0(1).unwrap();
        assert_eq!(coset_reps_box(&g1, 1.0), vec![GroupElement::identity()]);
        let reps = coset_reps_box(&g1, 2.5);
        let rows: HashSet<(i64, i64)> = reps.iter().skip(1).map(|g| (g.c, g.d)).collect();
        let mut expect = HashSet::new();
        for d in -6..=6 {
            expect.insert((1, d));
            if d % 2 != 0 {
                expect.insert((2, d));
            }
        }
        assert_eq!(rows, expect);
        let reps2 = coset_reps_box(&GroupSpec::gamma0(2).unwrap(), 2.5);
        assert!(reps2.iter().skip(1).all(|g| g.c == 2));
        assert_eq!(reps2.len(), 1 + 6);
    }

    #[test]
    fn box_reps_are_in_group_and_distinct() {
        for level in [1, 2, 3, 4] {
            let spec = GroupSpec::gamma0(level).unwrap();
            let reps = coset_reps_box(&spec, 7.3);
            let mut seen = HashSet::new();
            for g in &reps {
                assert!(contains(&spec, g), "{g}");
                let key = if g.c < 0 || (g.c == 0 && g.d < 0) { (-g.c, -g.d) } else { (g.c, g.d) };
                assert!(seen.insert(key), "duplicate coset {g}");
            }
        }
    }

    #[test]
    fn double_coset_counts() {
        let g1 = GroupSpec::gamma0(1).unwrap();
        let reps = double_coset_reps(&g1, 1);
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].1, vec![DoubleCosetRep { c: 1, d: 0, a: 0, b: -1 }]);
        let counts: Vec<usize> = double_coset_reps(&g1, 4).iter().map(|(_, v)| v.len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 2]);
        let g4 = GroupSpec::gamma0(4).unwrap();
        let r = double_coset_reps(&g4, 8);
        assert_eq!(r.iter().map(|(c, v)| (*c, v.len())).collect::<Vec<_>>(), vec![(4, 2), (8, 4)]);
        for (c, v) in double_coset_reps(&g1, 60) {
            assert_eq!(v.len() as u64, crate::arith::totient(c as u64));
            for r in v {
                assert_eq!(r.a * r.d - r.b * r.c, 1);
                assert!((0..c).contains(&r.a));
            }
        }
    }

    #[test]
    fn cusp_examples() {
        assert_eq!(cusp_image(&GroupElement::s()), Cusp::Rational(Rat::from_integer(0)));
        assert_eq!(cusp_image(&GroupElement::t_pow(1)), Cusp::Infinity);
        assert_eq!(cusp_image(&GroupElement::new(3, 1, 2, 1).unwrap()), Cusp::Rational(Rat::new(3, 2)));
    }

    #[test]
    fn t_conjugation_stays_in_double_coset() {
        let spec = GroupSpec::gamma0(3).unwrap();
        for (_, reps) in double_coset_reps(&spec, 30) {
            for r in reps {
                let g = GroupElement::t_pow(1).mul(&r.element()).mul(&GroupElement::t_pow(1));
                assert!(contains(&spec, &g));
                let canon = DoubleCosetRep::new(g.c, g.d).unwrap();
                assert_eq!((canon.c, canon.d), (r.c, r.d));
            }
        }
    }
}
