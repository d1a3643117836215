//! Closed-form SES matrix elements against the brute-force full-space block.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ses_core::densecx::{max_abs_diff, CVector};
use ses_core::fullspace::{
    build_full_hamiltonian, evolve_full_traced, leakage, project_to_ses, FullState, SesEmbedding,
};
use ses_core::grover::SesState;
use ses_core::hwmodel::{build_ses_hamiltonian, CouplingTensor, Couplings, HardwareModel};
use ses_core::schedule::{ControlSchedule, ControlSegment, SegmentKind};

fn random_model(n: usize, rng: &mut impl Rng) -> HardwareModel {
    let epsilon = (0..n).map(|_| rng.gen_range(1.0..10.0)).collect();
    let mut couplings = Couplings::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            couplings.set(i, j, rng.gen_range(-0.1..0.1));
        }
    }
    let mut t = [[0.0; 3]; 3];
    for row in t.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    HardwareModel::new(epsilon, couplings, CouplingTensor(t)).unwrap()
}

#[test]
fn two_hundred_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(2011);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = 2 + k % 7;
        let model = random_model(n, &mut rng);
        let full = build_full_hamiltonian(&model).unwrap();
        let projected = project_to_ses(&full, &SesEmbedding::new(n)).unwrap();
        let closed = build_ses_hamiltonian(&model);
        let diff = max_abs_diff(projected.matrix(), closed.matrix());
        worst = worst.max(diff);
        assert!(diff <= 1e-12, "model {k} (n={n}): {diff:e}");
    }
    println!("worst entrywise deviation {worst:e}");
}

#[test]
fn full_hamiltonian_is_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=6 {
        let h = build_full_hamiltonian(&random_model(n, &mut rng)).unwrap();
        assert!(max_abs_diff(&h, &h.adjoint()) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ses_block_hermitian_and_shift_covariant(seed in any::<u64>(), n in 1usize..9, shift in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(n, &mut rng);
        let h = build_ses_hamiltonian(&model);
        prop_assert!(max_abs_diff(h.matrix(), &h.matrix().adjoint()) == 0.0);

        let mut shifted = model.clone();
        for e in shifted.epsilon.iter_mut() {
            *e += shift;
        }
        let d = build_ses_hamiltonian(&shifted).into_matrix() - h.into_matrix();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { shift } else { 0.0 };
                prop_assert!((d[(i, j)].re - want).abs() < 1e-13 && d[(i, j)].im == 0.0);
            }
        }
    }

    /// With only zz couplings the excitation number is conserved, so an SES
    /// state never leaks.
    #[test]
    fn zz_only_never_leaks(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut segments = Vec::new();
        for _ in 0..3 {
            let mut couplings = Couplings::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    couplings.set(i, j, rng.gen_range(-0.5..0.5));
                }
            }
            segments.push(ControlSegment {
                label: SegmentKind::Inversion,
                duration: rng.gen_range(0.1..5.0),
                epsilon_offsets: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                couplings,
                post_phase: 0.0,
            });
        }
        // the schedule's segments use the exchange tensor; rebuild with zz
        let schedule = ControlSchedule::new(n, 6.0, segments).unwrap();
        let amps = CVector::from_fn(n, |_, _| {
            num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .normalize();
        let mut psi = FullState::from_ses(&SesState(amps)).unwrap();
        let emb = SesEmbedding::new(n);
        for seg in &schedule.segments {
            let mut model = seg.hardware_model(schedule.epsilon_base).unwrap();
            model.tensor = CouplingTensor::zz();
            let h = build_full_hamiltonian(&model).unwrap();
            let eig = ses_core::densecx::hermitian_eig(&h).unwrap();
            for k in 1..=8 {
                let t = seg.duration * k as f64 / 8.0;
                let s = FullState { n, amplitudes: eig.evolve(t, &psi.amplitudes).unwrap() };
                prop_assert!(leakage(&s, &emb) < 1e-12);
            }
            psi = FullState { n, amplitudes: eig.evolve(seg.duration, &psi.amplitudes).unwrap() };
        }
        // exchange coupling, by contrast, leaks into the 3-excitation sector
        if n >= 3 {
        let (_, trace) = evolve_full_traced(&schedule, &FullState::from_ses(&SesState::basis(n, 1)).unwrap(), 8).unwrap();
        prop_assert!(trace.iter().map(|s| s.max()).fold(0.0, f64::max) > 0.0);
        }
    }
}
