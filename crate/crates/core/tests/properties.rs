use ergochan::channels::{ErgodicChannel, ProbabilitySchedule};
use ergochan::divisibility::{
    c_eigenvalues_closed, c_eigenvalues_numeric, infinitesimal_divisibility, t_matrix,
};
use ergochan::ergotropy::{
    anti_ergotropy, ergotropy, ergotropy_qubit_closed, max_ergotropy_state, passive_state, sigma_w,
    Hamiltonian,
};
use ergochan::lindblad::{generator_ddim, generator_elementwise, HermitianBasis};
use ergochan::matkernel::random::{random_density, random_diagonal_density, random_hermitian};
use ergochan::matkernel::{trace_distance, BlochVector, DensityMatrix};
use ergochan::nonmarkov::{rhp_closed, rhp_rate};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bloch() -> impl Strategy<Value = BlochVector> {
    (
        0.0..=1.0f64,
        0.0..std::f64::consts::PI,
        0.0..2.0 * std::f64::consts::PI,
    )
        .prop_map(|(r, th, ph)| {
            BlochVector::new(
                r * th.sin() * ph.cos(),
                r * th.sin() * ph.sin(),
                r * th.cos(),
            )
            .unwrap()
        })
}

fn passive_tau(z_tau: f64) -> DensityMatrix {
    DensityMatrix::diagonal(&[0.5 * (1.0 + z_tau), 0.5 * (1.0 - z_tau)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channel_maps_compose_multiplicatively(seed: u64, d in 2usize..=5, p in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_diagonal_density(&mut rng, d);
        let rho = random_density(&mut rng, d);
        let ch = ErgodicChannel::new(tau, ProbabilitySchedule::Constant).unwrap();
        let twice = ch.apply_with_p(p, &ch.apply_with_p(q, &rho).unwrap()).unwrap();
        let once = ch.apply_with_p(p * q, &rho).unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-13);
    }

    #[test]
    fn channel_contracts_trace_distance(seed: u64, d in 2usize..=4, p in 0.0..=1.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ErgodicChannel::new(random_diagonal_density(&mut rng, d), ProbabilitySchedule::Constant).unwrap();
        let (a, b) = (random_density(&mut rng, d), random_density(&mut rng, d));
        let before = trace_distance(&a, &b).unwrap();
        let after = trace_distance(&ch.apply_with_p(p, &a).unwrap(), &ch.apply_with_p(p, &b).unwrap()).unwrap();
        prop_assert!((after - p * before).abs() < 1e-12);
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(seed: u64, d in 2usize..=5, p in 0.01..=1.0f64, pdot in -5.0..5.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_diagonal_density(&mut rng, d);
        let l = generator_ddim(&tau, p, pdot).unwrap();
        let h = random_hermitian(&mut rng, d);
        let out = l.apply(&h).unwrap();
        prop_assert!(out.trace().norm() <= 1e-10 * (1.0 + h.trace().norm()) * (1.0 + (pdot / p).abs()));
        prop_assert!(out.hermiticity_defect() <= 1e-12 * (1.0 + (pdot / p).abs()));
        prop_assert!(l.apply(tau.matrix()).unwrap().max_abs() <= 1e-12 * (1.0 + (pdot / p).abs()));
        let e = generator_elementwise(&tau, p, pdot).unwrap();
        prop_assert!(l.max_abs_diff(&e) <= 1e-12 * (1.0 + (pdot / p).abs()));
    }

    #[test]
    fn rhp_matches_general_closed_form(seed: u64, d in 2usize..=4, p in 0.05..=1.0f64, pdot in -3.0..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_diagonal_density(&mut rng, d);
        let g = rhp_rate(&generator_ddim(&tau, p, pdot).unwrap(), 1e-6).unwrap();
        let want = rhp_closed(d, p, pdot).unwrap();
        prop_assert!((g - want).abs() <= 1e-4f64.max(1e-3 * want), "{} vs {}", g, want);
    }

    #[test]
    fn hermitian_basis_is_orthonormal(d in 2usize..=6) {
        let basis = HermitianBasis::new(d).unwrap();
        let g = basis.elements();
        prop_assert_eq!(g.len(), d * d);
        prop_assert!((g[0].trace().re - (d as f64).sqrt()).abs() < 1e-12);
        for (i, a) in g.iter().enumerate() {
            prop_assert!(a.hermiticity_defect() < 1e-15);
            if i > 0 {
                prop_assert!(a.trace().norm() < 1e-12);
            }
            for (j, b) in g.iter().enumerate() {
                let ip = a.trace_product(b);
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip.re - want).abs() < 1e-12 && ip.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lorentz_spectrum_and_margin(b in bloch(), p in 1e-3..=1.0f64) {
        let closed = c_eigenvalues_closed(b.length(), p);
        let numeric = c_eigenvalues_numeric(&t_matrix(b, p).unwrap()).unwrap();
        for (x, y) in closed.iter().zip(numeric) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        let (margin, divisible) = infinitesimal_divisibility(b.length(), p).unwrap();
        prop_assert!(divisible);
        prop_assert!(margin >= -1e-12);
    }

    #[test]
    fn ergotropy_closed_form_and_bounds(r in bloch(), z_tau in 0.0..=1.0f64, p in 0.0..=1.0f64, e in 0.01..5.0f64) {
        let ch = ErgodicChannel::new(passive_tau(z_tau), ProbabilitySchedule::Constant).unwrap();
        let out = ch.apply_with_p(p, &DensityMatrix::from_bloch(r)).unwrap();
        let h = Hamiltonian::qubit(e).unwrap();
        let w = ergotropy(&out, &h).unwrap();
        prop_assert!((w - ergotropy_qubit_closed(r, z_tau, p, e).unwrap()).abs() <= 1e-10 * (1.0 + e));
        prop_assert!(w >= 0.0);
        prop_assert!(w + anti_ergotropy(&out, &h).unwrap() <= e + 1e-12);
        let passive = passive_state(&out, &h).unwrap();
        prop_assert_eq!(ergotropy(&passive, &h).unwrap(), 0.0);
    }

    #[test]
    fn ergotropy_nondecreasing_in_bloch_length(z in -1.0..=1.0f64, z_tau in 0.0..=1.0f64, p in 0.0..=1.0f64) {
        // At fixed z, states with larger transverse Bloch component never
        // have less ergotropy after the channel, so the maximum sits at r = 1.
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=20 {
            let r = z.abs() + (1.0 - z.abs()) * k as f64 / 20.0;
            let x = (r * r - z * z).max(0.0).sqrt();
            let w = ergotropy_qubit_closed(BlochVector::new(x, 0.0, z).unwrap(), z_tau, p, 1.0).unwrap();
            prop_assert!(w >= prev - 1e-15);
            prev = w;
        }
        let (_, w_max) = max_ergotropy_state(z_tau, p, 1.0).unwrap();
        prop_assert!(w_max >= prev - 1e-12);
    }

    #[test]
    fn sigma_w_sign_follows_pdot(t in 0.05..6.0f64, z_tau in 0.05..=1.0f64, gamma in 0.0..0.5f64) {
        let s = ProbabilitySchedule::damped_cosine(gamma, 1.0).unwrap();
        let (p, pdot) = s.eval(t).unwrap();
        prop_assume!(p > 1e-4 && pdot.abs() > 1e-3);
        let ch = ErgodicChannel::new(passive_tau(z_tau), s).unwrap();
        let sw = sigma_w(&ch, &Hamiltonian::qubit(1.0).unwrap(), t).unwrap();
        prop_assert_eq!(sw.raw.signum(), pdot.signum());
        prop_assert_eq!(sw.value, sw.raw.max(0.0));
    }

    #[test]
    fn projection_clips_and_normalizes(seed: u64, d in 2usize..=5, eps in 0.0..1e-13f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::basis(d, 0);
        let noise = random_hermitian(&mut rng, d).scale_real(eps);
        let projected = DensityMatrix::project(rho.matrix() + &noise).unwrap();
        prop_assert!(projected.eigenvalues().iter().all(|&v| v >= -1e-15));
        prop_assert!((projected.matrix().trace().re - 1.0).abs() < 1e-14);
        prop_assert!(projected.matrix().hermiticity_defect() == 0.0);
    }
}
