use basen_core::ffield::{
    bases_up_to, ff_expand, irreducibles_up_to, is_irreducible, monic_irreducibles,
    mult_order_mod, polys_of_degree, rudnick_cases, rudnick_sum, PolyFq, RudnickField,
};
use proptest::prelude::*;

fn poly(q: u64) -> impl Strategy<Value = PolyFq> {
    prop::collection::vec(0..q, 0..7).prop_map(move |c| PolyFq::new(q, c).unwrap())
}

fn inverse_mod(c: u64, q: u64) -> u64 {
    (1..q).find(|x| x * c % q == 1).unwrap()
}

proptest! {
    #[test]
    fn ring_laws(a in poly(5), b in poly(5), c in poly(5)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn division_identity(u in poly(7), v in poly(7)) {
        prop_assume!(!v.is_zero());
        let (quot, rem) = u.divmod(&v).unwrap();
        prop_assert_eq!(quot.mul(&v).add(&rem), u);
        prop_assert!(rem.degree().map_or(true, |d| d < v.degree().unwrap()));
    }

    #[test]
    fn render_round_trips(u in poly(3)) {
        prop_assert_eq!(PolyFq::parse(3, &u.render()).unwrap(), u);
    }
}

#[test]
fn irreducible_counts_match_necklace_formula() {
    // Number of monic irreducibles of degree d over F_q: (1/d) Σ_{e|d} μ(e) q^{d/e}.
    let expected: [(u64, u32, usize); 8] = [
        (2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (2, 6, 9),
        (3, 2, 3), (3, 3, 8), (5, 2, 10),
    ];
    for (q, d, count) in expected {
        assert_eq!(monic_irreducibles(q, d).unwrap().len(), count, "q={q} d={d}");
    }
    // A cubic is reducible iff it has a linear factor.
    for p in polys_of_degree(3, 3).unwrap().filter(|p| p.is_monic()) {
        let has_factor = polys_of_degree(3, 1).unwrap().any(|f| p.rem(&f).unwrap().is_zero());
        assert_eq!(is_irreducible(&p), !has_factor, "{p}");
    }
}

#[test]
fn expansions_reconstruct() {
    for (q, deg) in [(2u64, 6u32), (3, 4), (5, 3)] {
        for p in irreducibles_up_to(q, deg).unwrap() {
            for b in bases_up_to(q, 2).unwrap() {
                if !p.gcd(&b).is_one() {
                    continue;
                }
                let e = ff_expand(&p, &b).unwrap();
                assert!(e.reconstructs(), "P={p} B={b}");
                assert_eq!(e.period(), mult_order_mod(&b, &p).unwrap());
                let db = b.degree().unwrap();
                assert!(e.digits().iter().all(|a| a.degree().map_or(true, |d| d < db)));
            }
        }
    }
}

#[test]
fn scaling_the_modulus_scales_the_digits() {
    for q in [3u64, 5] {
        for p in irreducibles_up_to(q, 3).unwrap() {
            for b in bases_up_to(q, 1).unwrap() {
                if !p.gcd(&b).is_one() {
                    continue;
                }
                let base = ff_expand(&p, &b).unwrap();
                for c in 2..q {
                    let scaled = ff_expand(&p.scale(c), &b).unwrap();
                    assert_eq!(scaled.period(), base.period());
                    let inv = inverse_mod(c, q);
                    for (x, y) in scaled.digits().iter().zip(base.digits()) {
                        assert_eq!(*x, y.scale(inv), "P={p} c={c} B={b}");
                    }
                }
            }
        }
    }
}

#[test]
fn fast_path_matches_direct_sum() {
    for q in [2u64, 3] {
        let bases = bases_up_to(q, 2).unwrap();
        for p in irreducibles_up_to(q, 5).unwrap() {
            let mut field = RudnickField::new(&p).unwrap();
            for b in &bases {
                if !p.gcd(b).is_one() {
                    continue;
                }
                assert_eq!(field.case(b).unwrap(), rudnick_sum(&p, b).unwrap(), "P={p} B={b}");
            }
        }
    }
}

#[test]
fn rudnick_holds_for_small_fields() {
    for q in [2u64, 3] {
        let bases = bases_up_to(q, 2).unwrap();
        let mut probes = 0;
        for p in irreducibles_up_to(q, 6).unwrap() {
            let (cases, summary) = rudnick_cases(&p, &bases, 3).unwrap();
            assert_eq!(summary.failed, 0, "P={p}");
            for case in cases.iter().filter(|c| c.hypothesis()) {
                assert!(case.vanishes(), "P={p} B={}", case.b);
            }
            probes += cases.iter().filter(|c| !c.coprime_b_minus_1 && !c.vanishes()).count();
        }
        // The theorem is silent when P | B - 1; nonzero sums do occur there.
        assert!(probes > 0, "q={q}");
    }
}
