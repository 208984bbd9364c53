//! Multiplier systems with exact rational phases.
//!
//! The automorphy factor attached to weight `w` is `(c tau + d)^{-w}` on the
//! principal branch, so `psi(-I) = e(w/2)` is the consistency condition.

use crate::arith::{euclid_dedekind, frac, PhaseRational, Rat};
use crate::error::{Error, Result};
use crate::modgroup::GroupElement;
use crate::special::principal_power_nz;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;

/// One factor of a multiplier system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `epsilon^s`.
    EtaPower(i64),
    /// `rho_{n|h}^k` with `rho_{n|h}(gamma) = e(-cd/(nh))`.
    RhoNH { n: i64, h: i64, k: i64 },
}

/// A finite product of eta powers and `rho_{n|h}` characters; the empty product is trivial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiplierSystem {
    factors: Vec<Factor>,
}

impl MultiplierSystem {
    pub fn trivial() -> Self {
        MultiplierSystem { factors: vec![] }
    }

    pub fn eta_power(s: i64) -> Self {
        MultiplierSystem { factors: vec![Factor::EtaPower(s)] }.normalized()
    }

    pub fn rho(n: i64, h: i64) -> Result<Self> {
        if n < 1 || h < 1 || n % h != 0 || 24 % h != 0 {
            return Err(Error::InvalidInput(format!("rho:{n}|{h} needs h | n and h | 24")));
        }
        Ok(MultiplierSystem { factors: vec![Factor::RhoNH { n, h, k: 1 }] })
    }

    pub fn product(&self, other: &MultiplierSystem) -> Self {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        MultiplierSystem { factors: f }.normalized()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Merges eta powers and equal characters, drops trivial factors.
    fn normalized(self) -> Self {
        let mut eta = 0i64;
        let mut rhos: Vec<(i64, i64, i64)> = Vec::new();
        for f in self.factors {
            match f {
                Factor::EtaPower(s) => eta += s,
                Factor::RhoNH { n, h, k } => match rhos.iter_mut().find(|r| r.0 == n && r.1 == h) {
                    Some(r) => r.2 += k,
                    None => rhos.push((n, h, k)),
                },
            }
        }
        let mut factors = Vec::new();
        for (n, h, k) in rhos {
            // rho_{n|h} has order dividing n h
            let k = k.rem_euclid(n * h);
            if k != 0 {
                factors.push(Factor::RhoNH { n, h, k });
            }
        }
        let eta = eta.rem_euclid(24);
        if eta != 0 {
            let s = if eta > 12 { eta - 24 } else { eta };
            factors.push(Factor::EtaPower(s));
        }
        MultiplierSystem { factors }
    }

    /// The complex conjugate system `psi-bar`.
    pub fn conj(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|f| match *f {
                Factor::EtaPower(s) => Factor::EtaPower(-s),
                Factor::RhoNH { n, h, k } => Factor::RhoNH { n, h, k: -k },
            })
            .collect();
        MultiplierSystem { factors }.normalized()
    }

    /// Parses `trivial`, `eta:<s>`, `rho:<n>|<h>` (optionally `^<k>`) and `*`-joined products.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = MultiplierSystem::trivial();
        for part in s.split('*') {
            let p = part.trim();
            let bad = || Error::Parse(format!("unrecognised multiplier {p:?}"));
            let m = if p == "trivial" {
                MultiplierSystem::trivial()
            } else if let Some(e) = p.strip_prefix("eta:") {
                MultiplierSystem { factors: vec![Factor::EtaPower(e.trim().parse().map_err(|_| bad())?)] }
            } else if let Some(r) = p.strip_prefix("rho:") {
                let (nh, k) = match r.split_once('^') {
                    Some((nh, k)) => (nh, k.trim().parse::<i64>().map_err(|_| bad())?),
                    None => (r, 1),
                };
                let (n, h) = nh.split_once('|').ok_or_else(bad)?;
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let h: i64 = h.trim().parse().map_err(|_| bad())?;
                let mut m = MultiplierSystem::rho(n, h)?;
                m.factors[0] = Factor::RhoNH { n, h, k };
                m
            } else {
                return Err(bad());
            };
            out = out.product(&m);
        }
        Ok(out)
    }

    /// The smallest level on which every factor is defined.
    pub fn required_level(&self) -> i64 {
        self.factors.iter().fold(1, |acc, f| match f {
            Factor::EtaPower(_) => acc,
            Factor::RhoNH { n, .. } => acc.lcm(n),
        })
    }

    /// Exact phase `p` with `psi(g) = e(p)`.
    pub fn phase(&self, g: &GroupElement) -> Result<PhaseRational> {
        let mut total = Rat::zero();
        for f in &self.factors {
            match *f {
                Factor::EtaPower(s) => total += eta_phase(g).value() * s,
                Factor::RhoNH { n, h, k } => {
                    if g.c % n != 0 {
                        return Err(Error::Membership(g.to_string(), n));
                    }
                    total += Rat::new(-(g.c as i128 * g.d as i128 % (n * h) as i128) as i64 * k, n * h);
                }
            }
        }
        Ok(PhaseRational::new(total))
    }

    /// A common denominator `D` for the phases of all elements with lower-left entry `c`.
    pub fn phase_denominator(&self, c: i64) -> i64 {
        self.factors.iter().fold(1, |acc, f| match f {
            Factor::EtaPower(_) => acc.lcm(&(24 * c.abs().max(1))),
            Factor::RhoNH { n, h, .. } => acc.lcm(&(n * h)),
        })
    }

    /// `phase * den mod den` for a canonical representative with `c > 0`, `0 <= d < c`,
    /// given `s12 = 12 c s(d, c)`. `den` must be a multiple of [`Self::phase_denominator`].
    #[inline]
    pub fn phase_scaled_rep(&self, a: i64, c: i64, d: i64, s12: i64, den: i64) -> i64 {
        let mut acc: i64 = 0;
        for f in &self.factors {
            match *f {
                Factor::EtaPower(s) => {
                    let m = 24 * c;
                    let n = (-(a + d) + s12 + 3 * c).rem_euclid(m);
                    acc += (s.rem_euclid(m) * n).rem_euclid(m) * (den / m);
                }
                Factor::RhoNH { n, h, k } => {
                    let m = n * h;
                    acc += (-k * (c % m) * (d % m)).rem_euclid(m) * (den / m);
                }
            }
            acc %= den;
        }
        acc
    }

    /// `alpha` with `psi(T^h) = e(alpha)`, `0 <= alpha < 1`.
    pub fn alpha_at_infinity(&self, h: i64) -> PhaseRational {
        self.phase(&GroupElement::t_pow(h)).expect("T^h lies in every Gamma_0(n)")
    }

    /// `psi(-I) = e(w/2)`.
    pub fn consistency_check(&self, w: Rat) -> bool {
        self.phase(&GroupElement::minus_identity()).expect("-I lies in every Gamma_0(n)").value()
            == frac(w / 2)
    }
}

impl fmt::Display for MultiplierSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match *x {
                Factor::EtaPower(s) => format!("eta:{s}"),
                Factor::RhoNH { n, h, k: 1 } => format!("rho:{n}|{h}"),
                Factor::RhoNH { n, h, k } => format!("rho:{n}|{h}^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Phase of the Dedekind eta multiplier: `eta(g tau) eps(g) (c tau + d)^{-1/2} = eta(tau)`.
pub fn eta_phase(g: &GroupElement) -> PhaseRational {
    let (a, b, c, d) = (g.a, g.b, g.c, g.d);
    if c == 0 {
        return if d == 1 {
            PhaseRational::new(Rat::new(-b, 24))
        } else {
            // (-1, b; 0, -1) = -I T^{-b}
            PhaseRational::new(Rat::new(b, 24) + Rat::new(1, 4))
        };
    }
    if c < 0 {
        // sqrt(-(c tau + d)) = i sqrt(c tau + d) when c tau + d is in the lower half plane
        return eta_phase(&g.neg()) + PhaseRational::new(Rat::new(-1, 4));
    }
    let e = euclid_dedekind(d.rem_euclid(c), c);
    PhaseRational::new(Rat::new(-(a + d) + e.s12 + 3 * c, 24 * c))
}

/// Principal-branch automorphy factor `(c tau + d)^{-w}`.
#[inline]
pub fn automorphy(g: &GroupElement, tau: Complex64, w: f64) -> Complex64 {
    principal_power_nz(g.cocycle(tau), -w)
}

/// `|psi(g1) psi(g2) j(g1, g2 tau)^{w/2} j(g2, tau)^{w/2} - psi(g1 g2) j(g1 g2, tau)^{w/2}|`.
pub fn cocycle_residual(
    sys: &MultiplierSystem,
    w: Rat,
    g1: &GroupElement,
    g2: &GroupElement,
    tau: Complex64,
) -> Result<f64> {
    let wf = *w.numer() as f64 / *w.denom() as f64;
    let g12 = g1.mul(g2);
    let (g2tau, _) = crate::modgroup::moebius_and_j(g2, tau);
    let lhs = sys.phase(g1)?.to_unit() * sys.phase(g2)?.to_unit() * automorphy(g1, g2tau, wf) * automorphy(g2, tau, wf);
    let rhs = sys.phase(&g12)?.to_unit() * automorphy(&g12, tau, wf);
    Ok((lhs - rhs).norm())
}
