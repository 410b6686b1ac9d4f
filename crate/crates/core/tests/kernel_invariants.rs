use cherednik_core::*;

fn oracle_agrees<R: Ring>(ctx: DunklContext<R>, top: usize) {
    let mut k = GradedKernel::new(ctx.clone());
    k.compute_through(top);
    for d in 0..=top {
        let lv = k.level(d).unwrap();
        let oracle = gram_oracle_kernel(&ctx, d).unwrap();
        assert_eq!(
            oracle.rows(),
            lv.kernel_basis(ctx.ring()).rows(),
            "p={} n={} t={} d={d}",
            ctx.p(),
            ctx.n(),
            ctx.t()
        );
        if lv.dim_l() == 0 {
            break;
        }
    }
}

#[test]
fn recursive_kernel_matches_gram_oracle() {
    for (p, n) in [(2, 3), (2, 5), (3, 4)] {
        oracle_agrees(DunklContext::rational(p, n).unwrap(), n + 10);
        oracle_agrees(DunklContext::generic(p, n).unwrap(), 6);
    }
}

fn ideal_and_symmetry<R: Ring>(ctx: DunklContext<R>, top: usize) {
    let ring = ctx.ring().clone();
    let n = ctx.n();
    let mut k = GradedKernel::new(ctx.clone());
    k.compute_through(top + 1);
    for d in 1..=top {
        let polys = k.level(d).unwrap().kernel_polys(&ring);
        let here = k.level(d).unwrap();
        let next = k.level(d + 1).unwrap();
        let in_level = |lv: &Level<R>, f: &Poly<R>| {
            let v = lv.basis().coords(&ring, f).unwrap();
            lv.quotient().project(&ring, &v).iter().all(|x| ring.is_zero(x))
        };
        for f in polys.iter().take(12) {
            for a in 0..n {
                let g = ctx.x(a).mul(&ring, f).unwrap();
                assert!(in_level(next, &g), "x_{} times a kernel element left the kernel", a + 1);
            }
            for (i, j) in [(0, 1), (0, n - 1), (1, n - 1)] {
                let s = Transposition::new(i, j, n).unwrap();
                let g = apply_transposition(&ring, f, s, n).unwrap();
                assert!(in_level(here, &g), "transposition moved a kernel element out");
            }
        }
    }
}

#[test]
fn kernel_is_an_invariant_ideal() {
    ideal_and_symmetry(DunklContext::rational(3, 4).unwrap(), 4);
    ideal_and_symmetry(DunklContext::generic(2, 5).unwrap(), 5);
    ideal_and_symmetry(DunklContext::generic(3, 4).unwrap(), 4);
}

#[test]
fn kernel_members_pass_both_membership_tests() {
    let ctx = DunklContext::generic(2, 5).unwrap();
    let mut k = GradedKernel::new(ctx.clone());
    k.compute_through(4);
    for f in k.level(4).unwrap().kernel_polys(ctx.ring()).iter().take(5) {
        assert!(is_in_kernel(&ctx, f).unwrap().in_kernel);
        assert!(k.contains(f).unwrap().in_kernel);
    }
}

#[test]
fn fast_evaluation_matches_exact() {
    for (p, n) in [(2, 5), (3, 4)] {
        let exact = compute_hilbert(&HilbertRequest::new(p, n, 1)).unwrap();
        let mut req = HilbertRequest::new(p, n, 1);
        req.fast_eval = Some(FastEval { trials: 3, seed: 11 });
        let fast = compute_hilbert(&req).unwrap();
        assert!(fast.fast_eval.as_ref().unwrap().agree);
        assert_eq!(fast.series().unwrap(), exact.series().unwrap());
    }
}

#[test]
fn vanishing_persists() {
    for (p, n, t) in [(2, 5, 0), (3, 4, 1), (5, 6, 0)] {
        let mut k = GradedKernel::new(DunklContext::new(n, t, PolyRing::new(p).unwrap()).unwrap());
        let status = k.run(40, 2).unwrap();
        let KernelStatus::Complete { vanishing_degree } = status else {
            panic!("no vanishing degree");
        };
        k.compute_through(vanishing_degree + 4);
        assert!(k.dims_l()[vanishing_degree..].iter().all(|&d| d == 0));
    }
}

#[test]
fn every_monomial_of_degree_n_plus_7_is_in_the_kernel() {
    let n = 5;
    let ctx = DunklContext::generic(2, n).unwrap();
    let mut k = GradedKernel::new(ctx.clone());
    k.compute_through(n + 7);
    let lv = k.level(n + 7).unwrap();
    assert_eq!(lv.dim_l(), 0);
    for m in monomials_of_degree(n - 1, n + 7) {
        let f = Poly::from_term(ctx.ring(), m, ctx.ring().one());
        assert!(k.contains(&f).unwrap().in_kernel);
    }
}

#[test]
fn stability_holds_above_the_bound() {
    let opts = StabilityOptions {
        extra_above: 2,
        ..Default::default()
    };
    for text in ["x1^6", "x1^4*x2^4"] {
        let v = is_stably_in_kernel(&StabilityInstance::parse(text, 2).unwrap(), &opts).unwrap();
        assert!(v.stable);
        assert_eq!(v.above_bound.len(), 2, "{text}");
        assert!(v.above_bound.iter().all(|e| e.in_kernel), "{text}");
    }
}

#[test]
fn stability_is_invariant_under_renaming() {
    let opts = StabilityOptions::default();
    for (a, b) in [("x1^4*x2^4", "x3^4*x2^4"), ("x1^5*x2", "x2^5*x4")] {
        let va = is_stably_in_kernel(&StabilityInstance::parse(a, 2).unwrap(), &opts).unwrap();
        let vb = is_stably_in_kernel(&StabilityInstance::parse(b, 2).unwrap(), &opts).unwrap();
        assert_eq!(va.stable, vb.stable);
        assert_eq!(va.bound, vb.bound);
    }
}

#[test]
fn top_degree_generator_is_stable() {
    let report = verify_top_generator(0).unwrap();
    assert!(report.identity_holds);
    assert!(report.generator.stable && report.helper.stable && report.shifted.stable);
    assert!(report.verified);
}

#[test]
fn catalog_members_are_certified_in_regime() {
    for (family, p, n) in [
        (Family::TriangleSum, 2, 3),
        (Family::LinearProduct, 5, 6),
        (Family::SkewCubic, 5, 6),
        (Family::PowerP, 2, 3),
    ] {
        let ctx = DunklContext::rational(p, n).unwrap();
        assert!(certify(family, &family.default_indices(), &ctx).unwrap().certified, "{family} p={p} n={n}");
    }
}

#[test]
fn experimental_sweep_is_marked_non_certifying() {
    let opts = StabilityOptions {
        p: 3,
        t: 0,
        experimental: true,
        extra_above: 0,
    };
    let v = is_stably_in_kernel(&StabilityInstance::parse("x1^2*x2-x1*x2^2", 3).unwrap(), &opts).unwrap();
    assert!(!v.certifying);
    assert_eq!(v.per_n.iter().map(|e| e.n).collect::<Vec<_>>(), vec![3, 5]);
}
