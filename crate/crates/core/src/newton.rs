//! Numeric search for common complex zeros of homogeneous forms.
//!
//! Each restart fixes one coordinate to 1 (rotating through the coordinates)
//! and runs damped Gauss-Newton on the remaining ones. A point counts as a
//! zero when, rescaled to unit max-norm, every form is below the tolerance.
//! Failing to find one proves nothing.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, NumCast};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::poly::HomogeneousForm;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions<F> {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Step shrink factor applied while the residual increases.
    pub damping: F,
    pub tolerance: F,
    pub seed: u64,
}

impl Default for NewtonOptions<f64> {
    fn default() -> Self {
        Self { restarts: 100, max_iterations: 500, damping: 0.5, tolerance: 1e-10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Nullvector<F> {
    /// Unit max-norm representative.
    pub point: Vec<Complex<F>>,
    /// Max-norm of the forms at `point`.
    pub residual: F,
    pub restart: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NewtonOutcome<F> {
    Found(Nullvector<F>),
    NotFound { restarts: usize, best_residual: F },
}

/// Forms together with their Jacobian.
pub struct NewtonSystem {
    forms: Vec<HomogeneousForm>,
    jacobian: Vec<Vec<HomogeneousForm>>,
}

impl NewtonSystem {
    pub fn new(forms: Vec<HomogeneousForm>) -> Self {
        let n = forms.first().map_or(0, HomogeneousForm::var_count);
        let jacobian = forms.iter().map(|f| (0..n).map(|s| f.partial_derivative(s)).collect()).collect();
        Self { forms, jacobian }
    }

    pub fn var_count(&self) -> usize {
        self.jacobian.first().map_or(0, Vec::len)
    }

    pub fn evaluate<F: Float + Scalar>(&self, x: &[Complex<F>]) -> Result<Vec<Complex<F>>> {
        self.forms.iter().map(|f| f.evaluate(x)).collect()
    }

    fn jacobian_at<F: Float + Scalar>(&self, x: &[Complex<F>]) -> Result<Vec<Vec<Complex<F>>>> {
        self.jacobian.iter().map(|row| row.iter().map(|d| d.evaluate(x)).collect()).collect()
    }

    /// Max-norm of the forms at `x` rescaled to unit max-norm.
    pub fn unit_residual<F: Float + Scalar>(&self, x: &[Complex<F>]) -> Result<F> {
        let unit = unit_scale(x);
        Ok(max_norm(&self.evaluate(&unit)?))
    }
}

pub fn max_norm<F: Float>(v: &[Complex<F>]) -> F {
    v.iter().fold(F::zero(), |m, z| m.max(z.norm()))
}

/// `x / max|x_i|`, or `x` itself when it is zero.
pub fn unit_scale<F: Float>(x: &[Complex<F>]) -> Vec<Complex<F>> {
    let m = max_norm(x);
    if m.is_zero() {
        return x.to_vec();
    }
    x.iter().map(|z| z / m).collect()
}

/// Distance between the projective classes of `a` and `b`: both are divided
/// by their coordinate at the largest entry of `b`, then compared in max-norm.
pub fn projective_distance<F: Float>(a: &[Complex<F>], b: &[Complex<F>]) -> F {
    let j = (0..b.len()).max_by(|&i, &k| b[i].norm().partial_cmp(&b[k].norm()).unwrap()).unwrap();
    if a[j].norm().is_zero() {
        return F::infinity();
    }
    a.iter().zip(b).map(|(u, v)| (u / a[j] - v / b[j]).norm()).fold(F::zero(), F::max)
}

/// Least-squares step `argmin |J d + r|` via the normal equations, solved by
/// Gaussian elimination with partial pivoting. `None` when singular.
fn least_squares_step<F: Float>(j: &[Vec<Complex<F>>], r: &[Complex<F>]) -> Option<Vec<Complex<F>>> {
    let cols = j.first()?.len();
    let mut a = vec![vec![Complex::new(F::zero(), F::zero()); cols + 1]; cols];
    for (row, res) in j.iter().zip(r) {
        for p in 0..cols {
            let c = row[p].conj();
            for q in 0..cols {
                a[p][q] = a[p][q] + c * row[q];
            }
            a[p][cols] = a[p][cols] - c * res;
        }
    }
    for col in 0..cols {
        let pivot = (col..cols).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
        if a[pivot][col].norm() <= F::epsilon() * F::epsilon() {
            return None;
        }
        a.swap(col, pivot);
        let inv = a[col][col].inv();
        for row in col + 1..cols {
            let factor = a[row][col] * inv;
            for c in col..=cols {
                let sub = factor * a[col][c];
                a[row][c] = a[row][c] - sub;
            }
        }
    }
    let mut x = vec![Complex::new(F::zero(), F::zero()); cols];
    for row in (0..cols).rev() {
        let mut acc = a[row][cols];
        for c in row + 1..cols {
            acc = acc - a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn cast<F: Float>(v: f64) -> F {
    <F as NumCast>::from(v).unwrap()
}

/// Damped Gauss-Newton from `start` with coordinate `fixed` held at 1.
/// Returns the final point and the number of iterations used.
fn descend<F: Float + Scalar>(
    system: &NewtonSystem,
    mut x: Vec<Complex<F>>,
    fixed: usize,
    options: &NewtonOptions<F>,
) -> Result<(Vec<Complex<F>>, usize)> {
    let n = x.len();
    let free: Vec<usize> = (0..n).filter(|&i| i != fixed).collect();
    let mut residual = system.evaluate(&x)?;
    let mut norm = max_norm(&residual);
    let min_step = cast::<F>(1e-14);
    for iteration in 0..options.max_iterations {
        if system.unit_residual(&x)? < options.tolerance {
            return Ok((x, iteration));
        }
        let jac = system.jacobian_at(&x)?;
        let reduced: Vec<Vec<Complex<F>>> = jac.iter().map(|row| free.iter().map(|&c| row[c]).collect()).collect();
        let Some(step) = least_squares_step(&reduced, &residual) else {
            return Ok((x, iteration));
        };
        let mut scale = F::one();
        loop {
            let mut trial = x.clone();
            for (d, &c) in step.iter().zip(&free) {
                trial[c] = trial[c] + *d * scale;
            }
            let trial_residual = system.evaluate(&trial)?;
            let trial_norm = max_norm(&trial_residual);
            if trial_norm < norm || scale < min_step {
                x = trial;
                residual = trial_residual;
                norm = trial_norm;
                break;
            }
            scale = scale * options.damping;
        }
        if !norm.is_finite() {
            return Ok((x, iteration));
        }
    }
    Ok((x, options.max_iterations))
}

/// Searches for a nonzero common zero of `forms` (n forms in n variables).
pub fn newton_nullvector<F: Float + Scalar + Debug>(
    forms: &[HomogeneousForm],
    options: &NewtonOptions<F>,
) -> Result<NewtonOutcome<F>> {
    let system = NewtonSystem::new(forms.to_vec());
    let n = system.var_count();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best = F::infinity();
    for restart in 0..options.restarts {
        let fixed = restart % n;
        let start: Vec<Complex<F>> = (0..n)
            .map(|i| {
                if i == fixed {
                    Complex::new(F::one(), F::zero())
                } else {
                    Complex::new(cast(rng.gen_range(-1.0..1.0)), cast(rng.gen_range(-1.0..1.0)))
                }
            })
            .collect();
        let (x, iterations) = descend(&system, start, fixed, options)?;
        let residual = system.unit_residual(&x)?;
        if residual < options.tolerance {
            return Ok(NewtonOutcome::Found(Nullvector { point: unit_scale(&x), residual, restart, iterations }));
        }
        if residual < best {
            best = residual;
        }
    }
    Ok(NewtonOutcome::NotFound { restarts: options.restarts, best_residual: best })
}

/// Max-norm of `g(2x) - 2^(k-1) g(x)`, zero up to rounding for forms of
/// degree `k - 1`.
pub fn homogeneity_defect<F: Float + Scalar>(forms: &[HomogeneousForm], x: &[Complex<F>]) -> Result<F> {
    let system = NewtonSystem::new(forms.to_vec());
    let two = cast::<F>(2.0);
    let doubled: Vec<Complex<F>> = x.iter().map(|z| z * two).collect();
    let g = system.evaluate(x)?;
    let g2 = system.evaluate(&doubled)?;
    Ok(forms
        .iter()
        .zip(g.iter().zip(&g2))
        .map(|(f, (a, b))| (b - a * two.powi(f.degree() as i32)).norm())
        .fold(F::zero(), F::max))
}
