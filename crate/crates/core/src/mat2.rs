//! 2×2 helpers on top of `nalgebra`.

pub type Mat2 = nalgebra::Matrix2<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

/// The constant matrix `[[0, 1], [-1, 0]]`.
pub fn symplectic() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

/// `[[p, q], [q, -p]]`.
pub fn omega(p: f64, q: f64) -> Mat2 {
    Mat2::new(p, q, q, -p)
}

/// Rotation by `w`.
pub fn rotation(w: f64) -> Mat2 {
    let (s, c) = w.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// `diag(-1, 1)`.
pub fn flip() -> Mat2 {
    Mat2::new(-1.0, 0.0, 0.0, 1.0)
}

/// Free solution `(sin u, -cos u)`.
pub fn free_column(u: f64) -> Vec2 {
    let (s, c) = u.sin_cos();
    Vec2::new(s, -c)
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat2) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_composes_and_flip_conjugates() {
        let (a, b) = (0.7, -1.9);
        assert!(max_abs(&(rotation(a) * rotation(b) - rotation(a + b))) < 1e-15);
        assert!(max_abs(&(flip() * rotation(a) * flip() - rotation(-a))) < 1e-15);
        assert_eq!(symplectic() * symplectic(), -Mat2::identity());
    }

    #[test]
    fn omega_anticommutes_with_symplectic() {
        let m = omega(0.3, -0.8);
        assert_eq!(m * symplectic(), -(symplectic() * m));
        assert_eq!(m.transpose(), m);
    }
}
