//! Symmetric 0/1 matrices with zero diagonal, i.e. simple graphs, used to
//! split the search on the diamond poset.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RMatrix {
    m: usize,
    r: Vec<bool>,
}

impl RMatrix {
    pub fn new(m: usize, r: Vec<bool>) -> Result<Self> {
        if r.len() != m * m {
            return Err(Error::Argument("R matrix must be m×m".into()));
        }
        let rm = RMatrix { m, r };
        for i in 0..m {
            if rm.get(i, i) {
                return Err(Error::Argument(format!("R has a nonzero diagonal at {}", i + 1)));
            }
            for j in 0..i {
                if rm.get(i, j) != rm.get(j, i) {
                    return Err(Error::Argument("R is not symmetric".into()));
                }
            }
        }
        Ok(rm)
    }

    /// Builds the matrix from the upper triangle in row-major order.
    pub fn from_upper(m: usize, bits: &[bool]) -> Self {
        let mut r = vec![false; m * m];
        let mut it = bits.iter();
        for i in 0..m {
            for j in i + 1..m {
                let b = *it.next().expect("upper triangle too short");
                r[i * m + j] = b;
                r[j * m + i] = b;
            }
        }
        RMatrix { m, r }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.r[i * self.m + j]
    }

    pub fn upper(&self) -> Vec<bool> {
        (0..self.m)
            .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// `R^g` with `R^g[i][j] = R[g(i)][g(j)]`.
    pub fn permute(&self, g: &Perm) -> RMatrix {
        let m = self.m;
        let r = (0..m * m).map(|x| self.get(g.apply(x / m), g.apply(x % m))).collect();
        RMatrix { m, r }
    }

    /// Least upper triangle over all simultaneous relabelings.
    pub fn canonical(&self) -> RMatrix {
        all_perms(self.m)
            .map(|g| self.permute(&g))
            .min_by(|a, b| a.upper().cmp(&b.upper()))
            .expect("at least the identity")
    }

    pub fn is_canonical(&self) -> bool {
        let own = self.upper();
        all_perms(self.m).all(|g| self.permute(&g).upper() >= own)
    }

    /// All `g` with `R^g = R`, in lexicographic order.
    pub fn stabilizer(&self) -> Vec<Perm> {
        all_perms(self.m).filter(|g| self.permute(g) == *self).collect()
    }

    pub fn to_line(&self) -> String {
        let bits: String = self.upper().iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("{}:{}", self.m, bits)
    }

    pub fn from_line(s: &str) -> Result<Self> {
        let (m, bits) = s.split_once(':').ok_or_else(|| Error::Argument(format!("bad R matrix {s:?}")))?;
        let m: usize = m.parse().map_err(|_| Error::Argument(format!("bad R size {m:?}")))?;
        let bits: Vec<bool> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Argument(format!("bad R bit {c:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != m * m.saturating_sub(1) / 2 {
            return Err(Error::Argument("R upper triangle has the wrong length".into()));
        }
        Ok(RMatrix::from_upper(m, &bits))
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RMatrix({})", self.to_line())
    }
}

/// One canonical representative per relabeling class, in increasing order
/// of upper triangles. Exhaustive over all `2^(m(m-1)/2)` matrices, which is
/// fine up to `m = 6`.
pub fn enumerate_rmatrices(m: usize) -> Result<Vec<RMatrix>> {
    if m == 0 {
        return Err(Error::Argument("R matrix size must be at least 1".into()));
    }
    let e = m * (m - 1) / 2;
    let perms: Vec<Perm> = all_perms(m).collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << e {
        // bit e-1-t holds upper entry t so numeric order is lexicographic
        let upper: Vec<bool> = (0..e).map(|t| bits >> (e - 1 - t) & 1 == 1).collect();
        let r = RMatrix::from_upper(m, &upper);
        if perms.iter().all(|g| r.permute(g).upper() >= upper) {
            out.push(r);
        }
    }
    Ok(out)
}
