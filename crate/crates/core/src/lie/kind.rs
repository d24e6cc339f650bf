use std::fmt;

use crate::error::{Error, Result};

/// Which compact Lie algebra a value belongs to.
///
/// Derived ranks: `ℓ` (rank), `b = (dim + ℓ)/2` (big torus),
/// `u = (dim − ℓ)/2` (intermediate torus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Unitary(usize),
    So3,
}

impl AlgebraKind {
    pub fn unitary(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidKind("u(n) requires n >= 1".into()));
        }
        Ok(AlgebraKind::Unitary(n))
    }

    pub fn rank(self) -> usize {
        match self {
            AlgebraKind::Unitary(n) => n,
            AlgebraKind::So3 => 1,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            AlgebraKind::Unitary(n) => n * n,
            AlgebraKind::So3 => 3,
        }
    }

    pub fn big_rank(self) -> usize {
        (self.dim() + self.rank()) / 2
    }

    pub fn int_rank(self) -> usize {
        (self.dim() - self.rank()) / 2
    }

    /// Dimension of the part of the algebra acting trivially on the dual
    /// (the centre): 1 for `u(n)`, 0 for `so(3)`.
    pub fn center_dim(self) -> usize {
        match self {
            AlgebraKind::Unitary(_) => 1,
            AlgebraKind::So3 => 0,
        }
    }

    /// Side length of the matrices representing elements.
    pub fn size(self) -> usize {
        match self {
            AlgebraKind::Unitary(n) => n,
            AlgebraKind::So3 => 3,
        }
    }

    pub(crate) fn ensure_same(self, other: AlgebraKind) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                left: self,
                right: other,
            })
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Unitary(n) => write!(f, "u({n})"),
            AlgebraKind::So3 => f.write_str("so(3)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_ranks() {
        for n in 1..7 {
            let k = AlgebraKind::unitary(n).unwrap();
            assert_eq!(k.rank(), n);
            assert_eq!(k.dim(), n * n);
            assert_eq!(k.big_rank(), n * (n + 1) / 2);
            assert_eq!(k.int_rank(), n * (n - 1) / 2);
            assert_eq!(k.big_rank(), k.rank() + k.int_rank());
        }
        let s = AlgebraKind::So3;
        assert_eq!((s.rank(), s.dim(), s.big_rank(), s.int_rank()), (1, 3, 2, 1));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(AlgebraKind::unitary(0).is_err());
    }
}
