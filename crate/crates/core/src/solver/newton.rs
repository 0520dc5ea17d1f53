//! Damped Gauss-Newton from random complex starts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Description, PolySystem, SolutionSet};

#[derive(Clone, Debug)]
pub struct NewtonOptions {
    pub restarts: usize,
    /// Residual norm a point must reach to be kept.
    pub tol: f64,
    pub seed: u64,
    /// Radius of the ball of starting points.
    pub radius: f64,
    pub max_iter: usize,
    /// Distance under which two points count as one.
    pub dedupe: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { restarts: 200, tol: 1e-10, seed: 0, radius: 10.0, max_iter: 300, dedupe: 1e-6 }
    }
}

const HALVINGS: usize = 40;

/// Equations as lists of `(coefficient, [(unknown index, exponent)])`.
struct Compiled {
    eqs: Vec<Vec<(Complex64, Vec<(usize, u32)>)>>,
    n: usize,
}

impl Compiled {
    fn new(sys: &PolySystem) -> Self {
        let root = sys.field.embedding_root();
        let eqs = sys
            .equations
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        let vars = m
                            .pairs()
                            .iter()
                            .map(|(s, e)| (sys.unknowns.iter().position(|u| u == s).expect("unknown"), *e))
                            .collect();
                        (c.to_complex(root), vars)
                    })
                    .collect()
            })
            .collect();
        Compiled { eqs, n: sys.unknowns.len() }
    }

    /// The system with the extra equation `<a, x> = <a, through>`.
    fn sliced(&self, a: &DVector<Complex64>, through: &DVector<Complex64>) -> Compiled {
        let mut eqs = self.eqs.clone();
        let mut lin: Vec<(Complex64, Vec<(usize, u32)>)> = (0..self.n).map(|i| (a[i], vec![(i, 1)])).collect();
        lin.push((-a.dot(through), Vec::new()));
        eqs.push(lin);
        Compiled { eqs, n: self.n }
    }

    fn eval(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.eqs.len(),
            self.eqs.iter().map(|terms| {
                terms.iter().map(|(c, vars)| vars.iter().fold(*c, |acc, &(v, e)| acc * x[v].powu(e))).sum()
            }),
        )
    }

    fn jacobian(&self, x: &DVector<Complex64>) -> DMatrix<Complex64> {
        let mut j = DMatrix::zeros(self.eqs.len(), self.n);
        for (row, terms) in self.eqs.iter().enumerate() {
            for (c, vars) in terms {
                for (pos, &(v, e)) in vars.iter().enumerate() {
                    let mut d = *c * Complex64::new(e as f64, 0.0) * x[v].powu(e - 1);
                    for (other, &(w, f)) in vars.iter().enumerate() {
                        if other != pos {
                            d *= x[w].powu(f);
                        }
                    }
                    j[(row, v)] += d;
                }
            }
        }
        j
    }
}

/// Uniform point of the complex ball of the given radius.
fn random_start(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> DVector<Complex64> {
    let v: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = radius * rng.gen::<f64>().powf(1.0 / (2 * n).max(1) as f64) / norm;
    DVector::from_iterator(n, (0..n).map(|i| Complex64::new(v[2 * i] * r, v[2 * i + 1] * r)))
}

fn pinv_step(j: &DMatrix<Complex64>, f: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return None;
    }
    svd.solve(f, smax * 1e-12).ok()
}

fn polish(c: &Compiled, mut x: DVector<Complex64>, opts: &NewtonOptions) -> DVector<Complex64> {
    let mut fx = c.eval(&x);
    for _ in 0..opts.max_iter {
        let nf = fx.norm();
        if nf == 0.0 {
            break;
        }
        let Some(step) = pinv_step(&c.jacobian(&x), &fx) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..HALVINGS {
            let y = &x - &step * Complex64::new(t, 0.0);
            let fy = c.eval(&y);
            if fy.norm() < nf {
                x = y;
                fx = fy;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || step.norm() * t <= 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

/// Newton sampling of the solution variety.
///
/// Each restart starts at a random complex point of the ball of radius
/// `opts.radius`, takes least-squares steps (pseudo-inverse of the Jacobian)
/// halved up to 40 times until the residual drops, and is kept when the final
/// residual is below `opts.tol`. Points closer than `opts.dedupe` are merged.
/// Odd restarts add a random affine hyperplane through the starting point, so
/// that they land on positive-dimensional components away from the origin,
/// which attracts unsliced Newton runs on homogeneous systems.
/// An empty system returns random points flagged as unconstrained.
pub fn numeric_solve(sys: &PolySystem, opts: &NewtonOptions) -> SolutionSet {
    let n = sys.unknowns.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let compiled = Compiled::new(sys);
    let mut found: Vec<DVector<Complex64>> = Vec::new();
    for restart in 0..opts.restarts {
        let start = random_start(&mut rng, n, opts.radius);
        let x = if sys.equations.is_empty() {
            start
        } else if restart % 2 == 1 {
            let slice = random_start(&mut rng, n, 1.0);
            polish(&compiled.sliced(&slice, &start), start, opts)
        } else {
            polish(&compiled, start, opts)
        };
        if compiled.eval(&x).norm() >= opts.tol {
            continue;
        }
        if found.iter().all(|y| (y - &x).iter().map(|z| z.norm()).fold(0.0, f64::max) >= opts.dedupe) {
            found.push(x);
        }
    }
    SolutionSet {
        description: Description::Samples,
        unknowns: sys.unknowns.iter().map(|s| s.name().to_string()).collect(),
        points: Vec::new(),
        basis: Vec::new(),
        dimension: None,
        components: Vec::new(),
        decomposed: false,
        samples: found.into_iter().map(|v| v.iter().cloned().collect()).collect(),
        unconstrained: sys.equations.is_empty(),
    }
}
