//! Program points: paths into the algebraic data type of an object program.

use std::fmt;

/// A path of child indices into a constructor term. The empty path
/// designates the whole program.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProgramPoint(pub Vec<usize>);

impl ProgramPoint {
    pub fn root() -> ProgramPoint {
        ProgramPoint(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The point of the `i`-th child under this one.
    pub fn child(&self, i: usize) -> ProgramPoint {
        let mut path = self.0.clone();
        path.push(i);
        ProgramPoint(path)
    }

    pub fn concat(&self, other: &ProgramPoint) -> ProgramPoint {
        let mut path = self.0.clone();
        path.extend_from_slice(&other.0);
        ProgramPoint(path)
    }
}

impl fmt::Display for ProgramPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<usize>> for ProgramPoint {
    fn from(path: Vec<usize>) -> Self {
        ProgramPoint(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_and_child() {
        let pp = ProgramPoint::from(vec![0]);
        assert_eq!(pp.child(1), ProgramPoint::from(vec![0, 1]));
        assert_eq!(
            pp.concat(&ProgramPoint::from(vec![2, 3])),
            ProgramPoint::from(vec![0, 2, 3])
        );
        assert!(ProgramPoint::root().is_root());
    }

    #[test]
    fn display() {
        assert_eq!(ProgramPoint::root().to_string(), "[]");
        assert_eq!(ProgramPoint::from(vec![0, 1]).to_string(), "[0,1]");
    }
}
