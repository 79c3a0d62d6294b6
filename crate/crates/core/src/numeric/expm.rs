//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham's method).



use crate::error::Result;
use crate::numeric::linsolve::LuFactors;
use crate::numeric::matrix::ComplexMatrix;
use crate::scalar::{re, Real};

/// 1-norm threshold above which the argument is scaled down by powers of 2.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(A)` for a square complex matrix.
pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    assert!(a.is_square(), "expm requires a square matrix");
    a.check_finite()?;
    let norm = a.norm_one().to_f64().unwrap_or(f64::INFINITY);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scale = T::of(0.5).powi(squarings as i32);
    let a_scaled = a.scale(re(scale));

    let mut result = pade_13(&a_scaled)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

fn pade_13<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let b = |k: usize| re::<T>(T::of(PADE_13[k]));

    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let u_inner = a6
        .matmul(&a6.scale(b(13)).add(&a4.scale(b(11))).add(&a2.scale(b(9))))
        .add(&a6.scale(b(7)))
        .add(&a4.scale(b(5)))
        .add(&a2.scale(b(3)))
        .add(&id.scale(b(1)));
    let u = a.matmul(&u_inner);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let v = a6
        .matmul(&a6.scale(b(12)).add(&a4.scale(b(10))).add(&a2.scale(b(8))))
        .add(&a6.scale(b(6)))
        .add(&a4.scale(b(4)))
        .add(&a2.scale(b(2)))
        .add(&id.scale(b(0)));

    // exp(A) ~ (V - U)^{-1} (V + U)
    let denom = v.sub(&u);
    let numer = v.add(&u);
    Ok(LuFactors::new(&denom)?.solve_mat(&numer))
}
