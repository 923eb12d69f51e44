//! Property tests over seeded random inputs.

use proptest::prelude::*;
use qsconv::algebra::groups::{cyclic, direct_product, symmetric3};
use qsconv::algebra::{convolve, function_algebra, group_algebra, FiniteHyperbialgebra, Functional};
use qsconv::expectation::{delsarte_expectation, inversion_action, quotient_hyperbialgebra, subgroup_double_coset, Quotient};
use qsconv::focksim::{
    convolution_increment_residual, exp_inner, matrix_element, semigroup_consistency, weak_evolution, LegConvention, Segment, StepFunction,
};
use qsconv::generator::{assemble_from_tuple, extract_tuple, is_cpc, GeneratorMap, GeneratorTuple};
use qsconv::homdil::{counit_derivations, dilate, homold_residual};
use qsconv::json::{parse, AlgebraJson, GeneratorJson, TupleJson};
use qsconv::numerics::{c, max_abs_vec, psd_sqrt, CMatrix, CVector};
use qsconv::sampling::{
    random_contraction, random_representation, random_step_function, random_tuple, random_unitary, random_vector,
};
use qsconv::stinespring::verify_stinespring_identity;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn algebras() -> Vec<FiniteHyperbialgebra> {
    let z2 = cyclic(2);
    vec![
        function_algebra(&z2, 0).unwrap(),
        function_algebra(&cyclic(3), 0).unwrap(),
        function_algebra(&direct_product(&z2, &z2), 0).unwrap(),
        function_algebra(&symmetric3(), 0).unwrap(),
        group_algebra(&cyclic(3)).unwrap(),
        group_algebra(&symmetric3()).unwrap(),
    ]
}

fn quotients() -> Vec<(FiniteHyperbialgebra, Quotient)> {
    let (h, p, _) = subgroup_double_coset(&symmetric3(), &[0, 1], 1e-10).unwrap();
    let q1 = quotient_hyperbialgebra(&h, &p, 1e-10).unwrap();
    let z3 = group_algebra(&cyclic(3)).unwrap();
    let p = delsarte_expectation(&z3, &inversion_action(&cyclic(3)).unwrap(), 1e-10).unwrap();
    let q2 = quotient_hyperbialgebra(&z3, &p, 1e-10).unwrap();
    vec![(h, q1), (z3, q2)]
}

fn sample(seed: u64) -> (ChaCha8Rng, FiniteHyperbialgebra, GeneratorTuple) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let algs = algebras();
    let h = algs[rng.gen_range(0..algs.len())].clone();
    let dk = rng.gen_range(0..=3);
    let tup = random_tuple(&h, dk, 4, &mut rng);
    (rng, h, tup)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tuple_generators_are_cpc_and_roundtrip(seed in any::<u64>()) {
        let (_, h, tup) = sample(seed);
        let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
        prop_assert!(phi.reality_residual(&h) < 1e-12);
        prop_assert!(is_cpc(&phi, &h, 1e-8).unwrap().is_cpc());
        let ext = extract_tuple(&phi, &h, 1e-8).unwrap();
        prop_assert!(ext.k_dim <= tup.k_dim);
        prop_assert!(assemble_from_tuple(&ext, &h, 1e-8).unwrap().max_diff(&phi) < 1e-8);
    }

    #[test]
    fn dilation_compresses_and_is_homomorphic(seed in any::<u64>()) {
        let (_, h, tup) = sample(seed);
        let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
        let d = dilate(&tup, &h, 1e-8).unwrap();
        prop_assert!(d.report.passed(), "{:?}", d.report.failures());
        prop_assert!(d.psi.compress(tup.dk()).unwrap().max_diff(&phi) < 1e-12);
        prop_assert!(homold_residual(&d.psi, &h) < 1e-8);
        prop_assert!(is_cpc(&d.psi, &h, 1e-8).unwrap().is_cpc());
    }

    #[test]
    fn stinespring_identity_for_any_contraction(seed in any::<u64>(), norm in 0.0..=1.0f64) {
        let (mut rng, h, tup) = sample(seed);
        let b = random_contraction(tup.dk(), tup.k_dim, norm, &mut rng);
        let s = verify_stinespring_identity(&tup, Some(&b), &h, 1e-8).unwrap();
        prop_assert!(s.passed(), "{:?}", s.checks.failures());
    }

    #[test]
    fn expectation_correspondence(seed in any::<u64>()) {
        // (f∘P) ⋆ (g∘P) = (f ⋆̃ g)∘P for functionals on the range
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (h, q) in quotients() {
            let r = q.hyper.dim();
            let (f, g) = (Functional(random_vector(r, &mut rng)), Functional(random_vector(r, &mut rng)));
            let lift = |x: &Functional| Functional(q.compression.transpose() * &x.0);
            let lhs = convolve(&lift(&f), &lift(&g), &h).unwrap();
            let rhs = lift(&convolve(&f, &g, &q.hyper).unwrap());
            prop_assert!(max_abs_vec(&(lhs.0 - rhs.0)) < 1e-12);
        }
    }

    #[test]
    fn exchange_free_homomorphic_generators_vanish(seed in any::<u64>(), dk in 1usize..3) {
        // no (ε,ε)-derivations, so a real map with zero corner satisfies the
        // structure relations only when it is zero
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for h in algebras() {
            prop_assert_eq!(counit_derivations(&h).ncols(), 0);
            let n = h.dim();
            let mut blocks: Vec<CMatrix> = vec![CMatrix::zeros(1 + dk, 1 + dk); n];
            for i in 0..n {
                let j = (0..n).find(|&j| h.algebra.star_matrix()[(j, i)].norm() > 0.5).unwrap();
                if j < i {
                    continue;
                }
                let eta = random_vector(dk, &mut rng);
                let lambda = random_vector(1, &mut rng)[0];
                blocks[i].view_mut((1, 0), (dk, 1)).copy_from(&eta);
                blocks[j].view_mut((0, 1), (1, dk)).copy_from(&eta.adjoint());
                blocks[i][(0, 0)] = lambda;
                blocks[j][(0, 0)] = if i == j { c(lambda.re) } else { lambda.conj() };
            }
            let phi = GeneratorMap::new(dk, blocks).unwrap();
            prop_assert!(phi.reality_residual(&h) < 1e-12);
            prop_assert!(homold_residual(&phi, &h) > 1e-3);
        }
        let zero = GeneratorMap::zero(2, dk);
        prop_assert_eq!(homold_residual(&zero, &function_algebra(&cyclic(2), 0).unwrap()), 0.0);
    }

    #[test]
    fn weak_evolution_properties(seed in any::<u64>()) {
        let (mut rng, h, tup) = sample(seed);
        let dk = tup.dk();
        let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.2).collect();
        prop_assert!(semigroup_consistency(&phi, &times, &h, 1e-9).unwrap().passed());
        let f = random_step_function(dk, 1.5, 3, 1.0, &mut rng);
        let g = random_step_function(dk, 1.5, 3, 1.0, &mut rng);
        let (s, t) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let r = convolution_increment_residual(&phi, &f, &g, s, t, &h, LegConvention::Second).unwrap();
        prop_assert!(r < 1e-8);
        // F_0 = ε
        let f0 = weak_evolution(&phi, &f, &g, 0.0, &h).unwrap();
        prop_assert!(max_abs_vec(&(f0.0 - &h.coalgebra.counit)) < 1e-15);
    }

    #[test]
    fn unital_homomorphic_cocycles_preserve_the_unit(seed in any::<u64>()) {
        // D unitary, d = e = 0, t = 0: φ(1) = 0 and the structure relations
        // hold, so F_t(1) = 1 and the full element at 1 is exp∫⟨f, g⟩
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let algs = algebras();
        let h = algs[rng.gen_range(0..algs.len())].clone();
        let rho = random_representation(&h, 3, &mut rng);
        let k = rho[0].nrows();
        let tup = GeneratorTuple {
            k_dim: k,
            rho,
            d_op: random_unitary(k, &mut rng),
            xi: random_vector(k, &mut rng),
            d: CVector::zeros(k),
            e: CVector::zeros(k),
            t: 0.0,
        };
        let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
        prop_assert!(homold_residual(&phi, &h) < 1e-10);
        let f = random_step_function(k, 1.0, 3, 1.0, &mut rng);
        let g = random_step_function(k, 1.0, 3, 1.0, &mut rng);
        let t = rng.gen_range(0.0..1.5);
        let unit = h.algebra.unit();
        prop_assert!((weak_evolution(&phi, &f, &g, t, &h).unwrap().eval(unit) - c(1.0)).norm() < 1e-10);
        let restricted = StepFunction::new(k, f.segments().iter().filter(|s| s.t1 <= t).cloned().collect()).unwrap();
        let full = matrix_element(&phi, &restricted, &g, t, unit, &h).unwrap();
        prop_assert!((full - exp_inner(&restricted, &g, 0.0, t)).norm() < 1e-10);
    }

    #[test]
    fn json_roundtrips(seed in any::<u64>()) {
        let (_, h, tup) = sample(seed);
        let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
        let a: AlgebraJson = parse(&serde_json::to_string(&AlgebraJson::from_hyper(&h)).unwrap()).unwrap();
        let h2 = a.build().unwrap();
        prop_assert_eq!(h2.dim(), h.dim());
        let g: GeneratorJson = parse(&serde_json::to_string(&GeneratorJson::from_map(&phi)).unwrap()).unwrap();
        prop_assert!(g.build().unwrap().max_diff(&phi) == 0.0);
        let t: TupleJson = parse(&serde_json::to_string(&TupleJson::from_tuple(&tup)).unwrap()).unwrap();
        prop_assert!(assemble_from_tuple(&t.build().unwrap(), &h2, 1e-8).unwrap().max_diff(&phi) < 1e-14);
    }
}

#[test]
fn first_leg_breaks_the_increment_on_a_noncommutative_coproduct() {
    let h = function_algebra(&symmetric3(), 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // evaluations at two non-commuting points, the rest random
    let mut tup = random_tuple(&h, 1, 0, &mut rng);
    let u = random_unitary(2, &mut rng);
    tup.rho = (0..h.dim())
        .map(|i| {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = c(if i == 1 { 1.0 } else { 0.0 });
            m[(1, 1)] = c(if i == 3 { 1.0 } else { 0.0 });
            &u * m * u.adjoint()
        })
        .collect();
    tup.k_dim = 2;
    tup.xi = random_vector(2, &mut rng);
    tup.d_op = random_contraction(2, 1, 0.6, &mut rng);
    tup.d = psd_sqrt(&(CMatrix::identity(1, 1) - tup.d_op.adjoint() * &tup.d_op)).unwrap() * &tup.e;
    let phi = assemble_from_tuple(&tup, &h, 1e-8).unwrap();
    let seg = |t0, t1, value| Segment { t0, t1, value };
    let f = StepFunction::new(1, vec![seg(0.0, 0.3, random_vector(1, &mut rng)), seg(0.3, 1.1, random_vector(1, &mut rng))]).unwrap();
    let g = StepFunction::indicator(random_vector(1, &mut rng), 0.2, 0.9).unwrap();
    let second = convolution_increment_residual(&phi, &f, &g, 0.4, 0.6, &h, LegConvention::Second).unwrap();
    let first = convolution_increment_residual(&phi, &f, &g, 0.4, 0.6, &h, LegConvention::First).unwrap();
    assert!(second < 1e-12);
    assert!(first > 1e-3, "first-leg residual {first}");
}
