//! Symmetric quadrature on tetrahedra (Grundmann-Moeller family).

/// A rule in barycentric coordinates with weights summing to 1, so that
/// `int_T f ~= |T| * sum_q w_q f(x_q)`.
#[derive(Debug, Clone)]
pub struct TetRule {
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl TetRule {
    /// The Grundmann-Moeller rule of index `s`, exact for degree `2s + 1`.
    pub fn grundmann_moeller(s: usize) -> Self {
        const DIM: usize = 3;
        let d = 2 * s + 1;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        // scale by 3! so the weights sum to one on the reference simplex
        let reference_volume_inv = 6.0;
        for i in 0..=s {
            let denom = (d + DIM - 2 * i) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * 2f64.powi(-(2 * s as i32)) * denom.powi(d as i32)
                / (factorial(i) * factorial(d + DIM - i))
                * reference_volume_inv;
            for beta in compositions(s - i, DIM + 1) {
                let mut p = [0.0; 4];
                for (k, &bk) in beta.iter().enumerate() {
                    p[k] = (2 * bk + 1) as f64 / denom;
                }
                points.push(p);
                weights.push(w);
            }
        }
        Self {
            points,
            weights,
            degree: d,
        }
    }

    /// Smallest rule in the family exact for polynomials of `degree`.
    pub fn exact_for(degree: usize) -> Self {
        Self::grundmann_moeller(degree / 2)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All vectors of `parts` non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
