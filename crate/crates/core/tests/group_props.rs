use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;
use radmach::arith::{totient, Rat};
use radmach::modgroup::{moebius_and_j, contains, coset_reps_box, double_coset_reps, DoubleCosetRep, GroupElement, GroupSpec};
use radmach::multiplier::{automorphy, cocycle_residual, MultiplierSystem};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A random element of `Gamma_0(n)` with entries of moderate size.
fn random_element(rng: &mut StdRng, n: i64) -> GroupElement {
    loop {
        let c = n * rng.gen_range(-12i64..=12);
        let d = rng.gen_range(-40i64..=40);
        if c == 0 {
            if d == 1 || d == -1 {
                return GroupElement::new(d, rng.gen_range(-5..=5), 0, d).unwrap();
            }
            continue;
        }
        if d.gcd(&c) != 1 {
            continue;
        }
        let rep = DoubleCosetRep::new(c.abs(), d).unwrap().element();
        let g = GroupElement::t_pow(rng.gen_range(-3..=3)).mul(&rep).mul(&GroupElement::t_pow((d - rep.d) / c.abs()));
        return if c < 0 { g.neg() } else { g };
    }
}

/// Size of the automorphy factors being compared; the residual is measured relative to it.
fn scale(g1: &GroupElement, g2: &GroupElement, tau: Complex64, w: Rat) -> f64 {
    let wf = *w.numer() as f64 / *w.denom() as f64;
    let (g2tau, _) = moebius_and_j(g2, tau);
    let sides = automorphy(g1, g2tau, wf).norm() * automorphy(g2, tau, wf).norm();
    sides.max(automorphy(&g1.mul(g2), tau, wf).norm()).max(1.0)
}

#[test]
fn cocycle_residuals_for_eta_powers() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [1i64, 2, 3, 4, 6] {
        for s in [-3i64, -1, 1, 3] {
            let sys = MultiplierSystem::eta_power(s);
            let w = Rat::new(s, 2);
            let mut worst: f64 = 0.0;
            for _ in 0..1000 {
                let (g1, g2) = (random_element(&mut rng, n), random_element(&mut rng, n));
                assert!(contains(&GroupSpec::gamma0(n).unwrap(), &g1));
                let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
                worst = worst.max(cocycle_residual(&sys, w, &g1, &g2, tau).unwrap() / scale(&g1, &g2, tau, w));
            }
            assert!(worst < 1e-10, "n = {n}, s = {s}: {worst:e}");
        }
    }
}

#[test]
fn cocycle_residuals_for_mathieu_multipliers() {
    let mut rng = StdRng::seed_from_u64(11);
    for (n, h) in [(2i64, 1i64), (3, 1), (4, 2), (6, 1), (4, 1)] {
        let sys = MultiplierSystem::parse(&format!("rho:{n}|{h}*eta:-3")).unwrap();
        let w = Rat::new(1, 2);
        for _ in 0..1000 {
            let (g1, g2) = (random_element(&mut rng, n), random_element(&mut rng, n));
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
            let r = cocycle_residual(&sys, w, &g1, &g2, tau).unwrap() / scale(&g1, &g2, tau, w);
            assert!(r < 1e-10, "rho:{n}|{h}: {r:e} at {g1} {g2}");
        }
    }
}

#[test]
fn rho_is_multiplicative_exactly() {
    let mut rng = StdRng::seed_from_u64(13);
    for (n, h) in [(2i64, 2i64), (3, 3), (4, 2), (6, 6), (12, 12), (8, 4)] {
        let sys = MultiplierSystem::rho(n, h).unwrap();
        for _ in 0..500 {
            let (g1, g2) = (random_element(&mut rng, n), random_element(&mut rng, n));
            let lhs = sys.phase(&g1.mul(&g2)).unwrap();
            let rhs = sys.phase(&g1).unwrap() + sys.phase(&g2).unwrap();
            assert_eq!(lhs, rhs, "rho:{n}|{h} at {g1}, {g2}");
        }
    }
}

#[test]
fn box_reps_are_distinct_cosets() {
    for level in [1i64, 2, 5] {
        let spec = GroupSpec::gamma0(level).unwrap();
        let reps = coset_reps_box(&spec, 9.0);
        let mut seen = std::collections::HashSet::new();
        for g in &reps {
            assert!(contains(&spec, g));
            // left multiplication by +-T^k keeps the lower row up to sign
            let key = if g.c < 0 || (g.c == 0 && g.d < 0) { (-g.c, -g.d) } else { (g.c, g.d) };
            assert!(seen.insert(key), "duplicate coset {g}");
        }
    }
}

proptest! {
    #[test]
    fn eta_phase_denominator_divides_72c(c in 1i64..400, d in -400i64..400, s in prop::sample::select(vec![1i64, -1, 3, -3])) {
        prop_assume!(d.gcd(&c) == 1);
        let g = DoubleCosetRep::new(c, d).unwrap().element();
        let g = g.mul(&GroupElement::t_pow((d - g.d) / c));
        let p = MultiplierSystem::eta_power(s).phase(&g).unwrap().value();
        prop_assert_eq!((72 * c) % p.denom(), 0);
    }

    #[test]
    fn one_rep_per_unit_at_level_one(c in 1i64..600) {
        let reps = double_coset_reps(&GroupSpec::gamma0(1).unwrap(), c);
        prop_assert_eq!(reps.last().unwrap().1.len() as u64, totient(c as u64));
    }

    #[test]
    fn t_conjugates_share_the_double_coset(level in 1i64..7, m in 1i64..40, d in 0i64..400) {
        let spec = GroupSpec::gamma0(level).unwrap();
        let c = level * m;
        let d = (d..).find(|x| x.gcd(&c) == 1).unwrap();
        let rep = DoubleCosetRep::new(c, d).unwrap();
        let g = GroupElement::t_pow(1).mul(&rep.element()).mul(&GroupElement::t_pow(1));
        prop_assert!(contains(&spec, &g));
        let canon = DoubleCosetRep::new(g.c, g.d).unwrap();
        prop_assert_eq!((canon.c, canon.d), (rep.c, rep.d));
    }
}
