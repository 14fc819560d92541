use super::{LinalgError, Matrix, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

pub fn kron(f: &Matrix, g: &Matrix) -> Matrix {
    let (fr, fc) = f.shape();
    let (gr, gc) = g.shape();
    Matrix::from_fn(fr * gr, fc * gc, |i, j| {
        f[(i / gr, j / gc)] * g[(i % gr, j % gc)]
    })
}

/// Block-diagonal `f ⊕ g`.
pub fn direct_sum(f: &Matrix, g: &Matrix) -> Matrix {
    let (fr, fc) = f.shape();
    let (gr, gc) = g.shape();
    let mut m = Matrix::zeros(fr + gr, fc + gc);
    for i in 0..fr {
        for j in 0..fc {
            m[(i, j)] = f[(i, j)];
        }
    }
    for i in 0..gr {
        for j in 0..gc {
            m[(fr + i, fc + j)] = g[(i, j)];
        }
    }
    m
}

/// The permutation matrix sending basis vector `e_j` to `e_{map(j)}`.
pub fn permutation(n: usize, map: impl Fn(usize) -> usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        m[(map(j), j)] = one();
    }
    m
}

/// σ : X ⊗ Y → Y ⊗ X with `dim X = m`, `dim Y = n`.
pub fn swap(m: usize, n: usize) -> Matrix {
    permutation(m * n, |k| {
        let (i, j) = (k / n, k % n);
        j * m + i
    })
}

/// d : X ⊗ (Y ⊕ Z) → (X ⊗ Y) ⊕ (X ⊗ Z).
pub fn distrib(x: usize, y: usize, z: usize) -> Matrix {
    let w = y + z;
    permutation(x * w, |k| {
        let (i, s) = (k / w, k % w);
        if s < y {
            i * y + s
        } else {
            x * y + i * z + (s - y)
        }
    })
}

/// π_i : X ⊕ Y → X or Y, with `dim X = m`, `dim Y = n`.
pub fn proj(i: u8, m: usize, n: usize) -> Matrix {
    match i {
        1 => Matrix::from_fn(m, m + n, |r, c| if r == c { one() } else { C64::default() }),
        2 => Matrix::from_fn(
            n,
            m + n,
            |r, c| {
                if c == m + r {
                    one()
                } else {
                    C64::default()
                }
            },
        ),
        _ => panic!("projection index must be 1 or 2"),
    }
}

/// i_k : X or Y → X ⊕ Y.
pub fn inj(i: u8, m: usize, n: usize) -> Matrix {
    proj(i, m, n).transpose()
}

/// [f, g] : X ⊕ Y → Z.
pub fn copair(f: &Matrix, g: &Matrix) -> Result<Matrix, LinalgError> {
    if f.rows() != g.rows() {
        return Err(LinalgError::DimMismatch {
            op: "copair",
            lhs: f.shape(),
            rhs: g.shape(),
        });
    }
    let (r, fc, gc) = (f.rows(), f.cols(), g.cols());
    Ok(Matrix::from_fn(r, fc + gc, |i, j| {
        if j < fc {
            f[(i, j)]
        } else {
            g[(i, j - fc)]
        }
    }))
}

/// ⟨f, g⟩ : Z → X ⊕ Y.
pub fn pairing(f: &Matrix, g: &Matrix) -> Result<Matrix, LinalgError> {
    if f.cols() != g.cols() {
        return Err(LinalgError::DimMismatch {
            op: "pairing",
            lhs: f.shape(),
            rhs: g.shape(),
        });
    }
    let (fr, gr, c) = (f.rows(), g.rows(), f.cols());
    Ok(Matrix::from_fn(fr + gr, c, |i, j| {
        if i < fr {
            f[(i, j)]
        } else {
            g[(i - fr, j)]
        }
    }))
}

/// Φ : C(A ⊗ B, C) → C(A, [B, C]).
///
/// The hom object `[B, C] = B* ⊗ C` is indexed by `(y, z) ↦ y·c + z`.
pub fn curry(f: &Matrix, a: usize, b: usize, c: usize) -> Result<Matrix, LinalgError> {
    if f.shape() != (c, a * b) {
        return Err(LinalgError::DimMismatch {
            op: "curry",
            lhs: f.shape(),
            rhs: (c, a * b),
        });
    }
    Ok(Matrix::from_fn(b * c, a, |row, x| {
        let (y, z) = (row / c.max(1), row % c.max(1));
        f[(z, x * b + y)]
    }))
}

/// eval : [B, C] ⊗ B → C.
pub fn eval_map(b: usize, c: usize) -> Matrix {
    let mut m = Matrix::zeros(c, b * c * b);
    for y in 0..b {
        for z in 0..c {
            m[(z, (y * c + z) * b + y)] = one();
        }
    }
    m
}

/// The functor 𝓑 on morphisms: `vec(ρ) ↦ vec(f ρ f†)`.
pub fn bee(f: &Matrix) -> Matrix {
    kron(f, &f.conj())
}

/// τ : 𝓑(H) ⊗ 𝓑(K) → 𝓑(H ⊗ K) with `dim H = h`, `dim K = k`.
pub fn tau_iso(h: usize, k: usize) -> Matrix {
    let (hh, kk) = (h * h, k * k);
    permutation(hh * kk, |idx| {
        let (r, s) = (idx / kk.max(1), idx % kk.max(1));
        let (i, i2) = (r / h, r % h);
        let (j, j2) = (s / k, s % k);
        (i * k + j) * (h * k) + (i2 * k + j2)
    })
}
