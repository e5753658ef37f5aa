//! Dense matrices over 𝔽_q with machine-word entries, for the enumeration
//! inner loops.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fp {
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_slice(rows: usize, cols: usize, s: &[u64]) -> Self {
        Mat {
            rows,
            cols,
            data: s[..rows * cols].to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    /// `diag(block, 0)` of size rows×cols where `block` is the identity
    /// (`omega = false`) or Ω (`omega = true`) of size d.
    pub fn corner(rows: usize, cols: usize, d: usize, omega: bool, fp: &Fp) -> Self {
        let mut m = Mat::zeros(rows, cols);
        if omega {
            for b in 0..d / 2 {
                m.set(2 * b, 2 * b + 1, 1);
                m.set(2 * b + 1, 2 * b, fp.q - 1);
            }
        } else {
            for i in 0..d {
                m.set(i, i, 1);
            }
        }
        m
    }
}

impl Fp {
    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let mut out = Mat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for l in 0..a.cols {
                let x = a.get(i, l);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let idx = i * b.cols + j;
                    out.data[idx] = (out.data[idx] + x * b.get(l, j)) % self.q;
                }
            }
        }
        out
    }

    /// Aᵗ·Ω·A for A with an even number of rows.
    pub fn alt_gram(&self, a: &Mat) -> Mat {
        let q = self.q;
        let mut out = Mat::zeros(a.cols, a.cols);
        for i in 0..a.cols {
            for j in i + 1..a.cols {
                let mut s = 0;
                for b in 0..a.rows / 2 {
                    let (r0, r1) = (2 * b, 2 * b + 1);
                    s = (s + a.get(r0, i) * a.get(r1, j) + (q - a.get(r1, i)) * a.get(r0, j)) % q;
                }
                out.set(i, j, s);
                out.set(j, i, (q - s) % q);
            }
        }
        out
    }

    pub fn sym_gram(&self, a: &Mat) -> Mat {
        let mut out = Mat::zeros(a.cols, a.cols);
        for i in 0..a.cols {
            for j in i..a.cols {
                let s = (0..a.rows).fold(0, |s, r| (s + a.get(r, i) * a.get(r, j)) % self.q);
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        out
    }

    fn inv(&self, x: u64) -> u64 {
        let (mut base, mut e, mut acc) = (x % self.q, self.q - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.q;
            }
            base = base * base % self.q;
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self, a: &Mat) -> usize {
        let q = self.q;
        let mut m = a.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, rank * m.cols + j);
                }
            }
            let inv = self.inv(m.get(rank, c));
            for r in rank + 1..m.rows {
                let f = m.get(r, c) * inv % q;
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = (m.get(r, j) + (q - f) * m.get(rank, j)) % q;
                    m.set(r, j, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Rank of the leading d×d block, and whether everything outside it is zero.
    pub fn corner_rank(&self, g: &Mat, d: usize) -> Option<usize> {
        for i in 0..g.rows {
            for j in 0..g.cols {
                if (i >= d || j >= d) && g.get(i, j) != 0 {
                    return None;
                }
            }
        }
        let mut block = Mat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                block.set(i, j, g.get(i, j));
            }
        }
        Some(self.rank(&block))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_products() {
        let fp = Fp { q: 3 };
        let a = Mat::from_slice(2, 2, &[1, 2, 2, 1]);
        assert_eq!(fp.rank(&a), 1);
        assert_eq!(fp.mul(&a, &a), Mat::from_slice(2, 2, &[2, 1, 1, 2]));
        let y = Mat::from_slice(2, 2, &[1, 0, 0, 1]);
        assert_eq!(fp.alt_gram(&y), Mat::corner(2, 2, 2, true, &fp));
        assert_eq!(fp.sym_gram(&y), Mat::corner(2, 2, 2, false, &fp));
    }
}
