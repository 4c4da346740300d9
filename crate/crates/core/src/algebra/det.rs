
use super::{Polynomial, Scalar};

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
///
/// Rows are first rescaled to integral form via
/// [`Scalar::clear_row_denominators`], so over the rationals every
/// intermediate value is an integer minor and each division is exact.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut scale = T::one();
    for row in m.iter_mut() {
        debug_assert_eq!(row.len(), n, "matrix must be square");
        scale = scale * T::clear_row_denominators(row);
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            for j in k + 1..n {
                let v = (m[i][j].clone() * pivot.clone() - lead.clone() * m[k][j].clone())
                    / prev.clone();
                m[i][j] = v;
            }
            m[i][k] = T::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone() / scale;
    if negate {
        -det
    } else {
        det
    }
}

/// Interpolating polynomial through `(xs[k], ys[k])`, Newton form converted
/// to ascending coefficients. The `xs` must be pairwise distinct.
pub fn interpolate<T: Scalar>(xs: &[T], ys: &[T]) -> Polynomial<T> {
    assert_eq!(xs.len(), ys.len(), "one value per interpolation point");
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (dd[k].clone() - dd[k - 1].clone()) / (xs[k].clone() - xs[k - level].clone());
        }
    }
    let mut p = Polynomial::zero();
    for k in (0..n).rev() {
        let factor = Polynomial::linear(-xs[k].clone(), T::one());
        p = &(&p * &factor) + &Polynomial::constant(dd[k].clone());
    }
    p
}

/// Upper bound on the determinant's degree: sum of the per-row maximum degrees.
fn degree_bound<T: Scalar>(m: &[Vec<Polynomial<T>>]) -> usize {
    m.iter()
        .map(|row| row.iter().filter_map(Polynomial::degree).max().unwrap_or(0))
        .sum()
}

/// Determinant of a square polynomial matrix, evaluated at the points
/// `0, 1, 2, ...` and interpolated. For matrices with entries of degree at
/// most one, `n + 1` points are used.
pub fn poly_det_affine<T: Scalar>(m: &[Vec<Polynomial<T>>]) -> Polynomial<T> {
    let points: Vec<T> = (0..=degree_bound(m))
        .map(|k| T::from_usize(k).expect("point index fits the scalar type"))
        .collect();
    poly_det_affine_at(m, &points)
}

/// As [`poly_det_affine`], with caller-chosen distinct evaluation points.
/// Panics if fewer points are supplied than the degree bound requires.
pub fn poly_det_affine_at<T: Scalar>(m: &[Vec<Polynomial<T>>], points: &[T]) -> Polynomial<T> {
    let needed = degree_bound(m) + 1;
    assert!(
        points.len() >= needed,
        "need {needed} evaluation points, got {}",
        points.len()
    );
    let points = &points[..needed];
    let values: Vec<T> = points
        .iter()
        .map(|x| {
            let at: Vec<Vec<T>> = m
                .iter()
                .map(|row| row.iter().map(|p| p.eval(x)).collect())
                .collect();
            determinant(at)
        })
        .collect();
    interpolate(points, &values)
}
