use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ses_core::densecx::{hermitian_eig, max_abs_diff, CMatrix};

#[test]
fn reconstruction_at_dim_1024() {
    let mut rng = ChaCha8Rng::seed_from_u64(1024);
    let dim = 1024;
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let h = (&a + a.adjoint()).scale(0.5);
    let eig = hermitian_eig(&h).unwrap();
    let scale = eig.values.amax();
    let err = max_abs_diff(&eig.reconstruct(), &h);
    assert!(err <= 1e-10 * scale.max(1.0), "{err:e}");
}
