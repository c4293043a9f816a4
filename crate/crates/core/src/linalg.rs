//! Dense thin SVD by one-sided Jacobi rotations.
//!
//! Matrices are column-major `Vec<f64>`. Sized for term-document matrices of
//! a few thousand rows and a few hundred columns.

/// `A = U diag(s) Vᵀ` with `U` m×r, `V` n×r, `r = min(m, n)`, singular values
/// non-increasing. Columns of `U` and `V` are orthonormal, including those
/// paired with zero singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub rows: usize,
    pub cols: usize,
    /// m×r, column-major.
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    /// n×r, column-major.
    pub v: Vec<f64>,
}

impl Svd {
    pub fn rank_dim(&self) -> usize {
        self.s.len()
    }

    pub fn u_col(&self, j: usize) -> &[f64] {
        &self.u[j * self.rows..(j + 1) * self.rows]
    }

    pub fn v_col(&self, j: usize) -> &[f64] {
        &self.v[j * self.cols..(j + 1) * self.cols]
    }

    /// Threshold below which a singular value counts as zero.
    pub fn zero_tolerance(&self) -> f64 {
        let smax = self.s.first().copied().unwrap_or(0.0);
        smax * (self.rows.max(self.cols) as f64) * f64::EPSILON
    }

    /// Frobenius norm of `A − U_k Σ_k V_kᵀ`, computed from the discarded
    /// singular values.
    pub fn truncation_error(&self, k: usize) -> f64 {
        self.s.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt()
    }
}

const MAX_SWEEPS: usize = 80;
const ROTATION_TOL: f64 = 1e-15;

/// Thin SVD of the `rows × cols` column-major matrix `a`.
pub fn thin_svd(a: &[f64], rows: usize, cols: usize) -> Svd {
    assert_eq!(a.len(), rows * cols, "matrix shape");
    if rows >= cols {
        jacobi(a.to_vec(), rows, cols)
    } else {
        let t = transpose(a, rows, cols);
        let svd = jacobi(t, cols, rows);
        Svd {
            rows,
            cols,
            u: svd.v,
            s: svd.s,
            v: svd.u,
        }
    }
}

pub fn transpose(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut t = vec![0.0; rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            t[i * cols + j] = a[j * rows + i];
        }
    }
    t
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mutable views of columns `p < q`.
fn column_pair(data: &mut [f64], len: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let (head, tail) = data.split_at_mut(q * len);
    (&mut head[p * len..(p + 1) * len], &mut tail[..len])
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*xi, *yi);
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

/// Requires `m >= n`.
fn jacobi(mut w: Vec<f64>, m: usize, n: usize) -> Svd {
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut norms: Vec<f64> = (0..n)
            .map(|j| {
                let c = &w[j * m..(j + 1) * m];
                dot(c, c)
            })
            .collect();
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (wp, wq) = column_pair(&mut w, m, p, q);
                let gamma = dot(wp, wq);
                if gamma.abs() <= ROTATION_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(wp, wq, c, s);
                norms[p] = alpha - t * gamma;
                norms[q] = beta + t * gamma;
                let (vp, vq) = column_pair(&mut v, n, p, q);
                rotate(vp, vq, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = (0..n)
        .map(|j| {
            let c = &w[j * m..(j + 1) * m];
            dot(c, c).sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));

    let smax = order.first().map_or(0.0, |&j| sigma[j]);
    let tol = smax * (m as f64) * f64::EPSILON;

    let mut u = vec![0.0; m * n];
    let mut v_sorted = vec![0.0; n * n];
    let mut s = vec![0.0; n];
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        v_sorted[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
        if sigma[src] > tol {
            s[dst] = sigma[src];
            let inv = 1.0 / sigma[src];
            for (ui, wi) in u[dst * m..(dst + 1) * m]
                .iter_mut()
                .zip(&w[src * m..(src + 1) * m])
            {
                *ui = wi * inv;
            }
        } else {
            missing.push(dst);
        }
    }
    complete_orthonormal(&mut u, m, &missing);

    Svd {
        rows: m,
        cols: n,
        u,
        s,
        v: v_sorted,
    }
}

/// Fills the listed columns of `basis` (m rows) with unit vectors orthogonal
/// to every other column, via Gram–Schmidt on coordinate vectors.
fn complete_orthonormal(basis: &mut [f64], m: usize, missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let total = basis.len() / m;
    let mut filled: Vec<usize> = (0..total).filter(|j| !missing.contains(j)).collect();
    let mut candidate = 0;
    for &j in missing {
        loop {
            assert!(candidate < m, "cannot complete an orthonormal basis");
            let mut x = vec![0.0; m];
            x[candidate] = 1.0;
            candidate += 1;
            // Two passes of classical Gram–Schmidt.
            for _ in 0..2 {
                for &k in &filled {
                    let col = &basis[k * m..(k + 1) * m];
                    let proj = dot(col, &x);
                    for (xi, ci) in x.iter_mut().zip(col) {
                        *xi -= proj * ci;
                    }
                }
            }
            let norm = dot(&x, &x).sqrt();
            if norm > 0.5 {
                for (dst, xi) in basis[j * m..(j + 1) * m].iter_mut().zip(&x) {
                    *dst = xi / norm;
                }
                filled.push(j);
                break;
            }
        }
    }
}
