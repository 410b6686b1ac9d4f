use cherednik_core::group::divided_difference_by_division;
use cherednik_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ring_axioms<R: Ring>(ring: &R, seed: u64) {
    let mut g = rng(seed);
    let a = ring.random_elem(&mut g);
    let b = ring.random_elem(&mut g);
    let c = ring.random_elem(&mut g);
    assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
    assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
    assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
    assert_eq!(
        ring.mul(&a, &ring.add(&b, &c)),
        ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
    );
    assert!(ring.is_zero(&ring.add(&a, &ring.neg(&a))));
    assert_eq!(ring.mul(&a, &ring.one()), a);
    let p = ring.characteristic() as i64;
    assert!(ring.is_zero(&ring.from_int(p)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prime_field_axioms(seed in any::<u64>(), pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 2_147_483_647][pi];
        let f = PrimeField::new(p).unwrap();
        ring_axioms(&f, seed);
        let a = f.random_elem(&mut rng(seed ^ 1));
        if a != 0 {
            prop_assert_eq!(f.mul(&a, &f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn poly_ring_axioms(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        ring_axioms(&PolyRing::new(p).unwrap(), seed);
    }

    #[test]
    fn rational_function_axioms(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = RatFuncField::new(p).unwrap();
        ring_axioms(&f, seed);
        let a = f.random_elem(&mut rng(seed ^ 2));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn extension_field_axioms(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let f = ExtField::random(p, 16, &mut rng(seed)).unwrap();
        ring_axioms(&f, seed ^ 3);
        let a = f.random_elem(&mut rng(seed ^ 4));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>(), n in 3usize..6, d in 0usize..4) {
        let ctx = DunklContext::generic(3, n).unwrap();
        let f = ctx.random_poly(d, &mut rng(seed));
        let text = f.format(ctx.ring());
        prop_assert_eq!(parse_poly(&text, n - 1, ctx.ring()).unwrap(), f);

        let q = RatFuncField::new(3).unwrap();
        let ctx = DunklContext::new(n, 1, q.clone()).unwrap();
        let g = ctx.random_poly(d, &mut rng(seed ^ 5));
        let text = g.format(&q);
        prop_assert_eq!(parse_poly(&text, n - 1, &q).unwrap(), g);
    }

    #[test]
    fn transpositions_are_involutions(seed in any::<u64>(), n in 3usize..7, d in 0usize..4) {
        let ctx = DunklContext::rational(5, n).unwrap();
        let ring = ctx.ring();
        let f = ctx.random_poly(d, &mut rng(seed));
        for i in 0..n {
            for j in i + 1..n {
                let s = Transposition::new(i, j, n).unwrap();
                let once = apply_transposition(ring, &f, s, n).unwrap();
                prop_assert_eq!(once.homogeneous_degree().or(Some(d)), Some(d));
                prop_assert_eq!(apply_transposition(ring, &once, s, n).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn divided_difference_paths_agree(seed in any::<u64>(), n in 3usize..6, d in 0usize..5) {
        let ctx = DunklContext::generic(2, n).unwrap();
        let ring = ctx.ring();
        let f = ctx.random_poly(d, &mut rng(seed));
        for i in 0..n {
            for k in (0..n).filter(|&k| k != i) {
                prop_assert_eq!(
                    divided_difference(ring, &f, i, k, n).unwrap(),
                    divided_difference_by_division(ring, &f, i, k, n)
                );
            }
        }
    }

    #[test]
    fn dunkl_operators_lower_degree(seed in any::<u64>(), n in 3usize..6, d in 1usize..5) {
        let ctx = DunklContext::generic(3, n).unwrap();
        let f = ctx.random_poly(d, &mut rng(seed));
        for i in 0..n {
            let g = ctx.dunkl_difference(&f, i, (i + 1) % n).unwrap();
            prop_assert!(g.is_zero() || g.homogeneous_degree() == Some(d - 1));
        }
    }

    #[test]
    fn dunkl_operators_are_equivariant(seed in any::<u64>(), n in 3usize..6, d in 1usize..4) {
        // s D_{y_i - y_j} s = D_{y_s(i) - y_s(j)}
        let ctx = DunklContext::generic(2, n).unwrap();
        let ring = ctx.ring();
        let f = ctx.random_poly(d, &mut rng(seed));
        let s = Transposition::new(0, n - 1, n).unwrap();
        let swap = |k: usize| if k == 0 { n - 1 } else if k == n - 1 { 0 } else { k };
        let sf = apply_transposition(ring, &f, s, n).unwrap();
        for i in 0..n {
            let j = (i + 1) % n;
            let lhs = apply_transposition(ring, &ctx.dunkl_difference(&sf, i, j).unwrap(), s, n).unwrap();
            prop_assert_eq!(lhs, ctx.dunkl_difference(&f, swap(i), swap(j)).unwrap());
        }
    }

    #[test]
    fn echelon_form_is_canonical(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let ring = PolyRing::new(3).unwrap();
        let mut g = rng(seed);
        let m: Vec<Vec<UPoly>> = (0..rows)
            .map(|_| (0..cols).map(|_| ring.random_elem(&mut g)).collect())
            .collect();
        let mut a = RowEchelon::new(cols);
        let mut b = RowEchelon::new(cols);
        for r in &m {
            a.insert(&ring, r.clone());
        }
        for r in m.iter().rev() {
            b.insert(&ring, r.clone());
        }
        prop_assert_eq!(a.rows(), b.rows());
        let k = a.kernel(&ring);
        prop_assert_eq!(k.rank() + a.rank(), cols);
        for v in k.rows() {
            prop_assert!(a.project(&ring, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn membership_paths_agree(seed in any::<u64>(), d in 1usize..5) {
        let ctx = DunklContext::generic(2, 5).unwrap();
        let f = ctx.random_poly(d, &mut rng(seed));
        let mut k = GradedKernel::new(ctx.clone());
        let a = k.contains(&f).unwrap();
        let b = is_in_kernel(&ctx, &f).unwrap();
        prop_assert_eq!(a.in_kernel, b.in_kernel);
        if let Some(w) = b.witness {
            let pairing = contravariant_pairing(&ctx, &w, &f).unwrap();
            prop_assert!(!pairing.is_zero());
        }
    }
}
