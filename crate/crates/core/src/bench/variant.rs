use std::fmt;
use std::str::FromStr;

use crate::compound::Strategy;
use crate::error::{Error, Result};
use crate::tcore::TShape;

/// One row of the benchmark grid: a named t-scalar shape and the
/// neighborhood strategy that produces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Pca,
    Tpca,
    TpcaA,
    TpcaB,
    TpcaX,
    TpcaY,
    TpcaZ,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Pca,
        Variant::Tpca,
        Variant::TpcaA,
        Variant::TpcaB,
        Variant::TpcaX,
        Variant::TpcaY,
        Variant::TpcaZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pca => "PCA",
            Variant::Tpca => "TPCA",
            Variant::TpcaA => "TPCA-A",
            Variant::TpcaB => "TPCA-B",
            Variant::TpcaX => "TPCA-X",
            Variant::TpcaY => "TPCA-Y",
            Variant::TpcaZ => "TPCA-Z",
        }
    }

    pub fn strategy(self) -> Strategy {
        match self {
            Variant::Pca => Strategy::Plain,
            Variant::Tpca => Strategy::Nested { reuses: 1 },
            Variant::TpcaA => Strategy::Nested { reuses: 2 },
            Variant::TpcaB => Strategy::Nested { reuses: 3 },
            Variant::TpcaX => Strategy::Window { size: 5 },
            Variant::TpcaY => Strategy::Window { size: 7 },
            Variant::TpcaZ => Strategy::Window { size: 9 },
        }
    }

    pub fn shape(self) -> TShape {
        self.strategy().shape().expect("built-in strategies are valid")
    }

    /// Parses a comma-separated list, keeping the given order and dropping repeats.
    pub fn parse_list(list: &str) -> Result<Vec<Variant>> {
        let mut out = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v: Variant = item.parse()?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
        if out.is_empty() {
            return Err(Error::invalid("no variants given"));
        }
        Ok(out)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown variant `{s}` (expected one of pca, tpca, tpca-a, tpca-b, tpca-x, tpca-y, tpca-z)"
                ))
            })
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list of dimensions.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid(format!("bad dimension list `{spec}`"));
    let mut dims: Vec<usize> = if spec.contains(':') {
        let parts: Vec<usize> = spec
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let (start, stop, step) = match parts[..] {
            [a, b] => (a, b, 1),
            [a, b, c] => (a, b, c),
            _ => return Err(bad()),
        };
        if step == 0 || start > stop {
            return Err(bad());
        }
        (start..=stop).step_by(step).collect()
    } else {
        spec.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    dims.sort_unstable();
    dims.dedup();
    if dims.first() == Some(&0) || dims.is_empty() {
        return Err(bad());
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_bindings() {
        let shapes: Vec<Vec<usize>> = Variant::ALL.iter().map(|v| v.shape().dims().to_vec()).collect();
        assert_eq!(shapes[0], vec![1]);
        assert_eq!(shapes[1], vec![3, 3]);
        assert_eq!(shapes[2], vec![3; 4]);
        assert_eq!(shapes[3], vec![3; 6]);
        assert_eq!(shapes[4], vec![5, 5]);
        assert_eq!(shapes[5], vec![7, 7]);
        assert_eq!(shapes[6], vec![9, 9]);
    }

    #[test]
    fn parsing() {
        assert_eq!(Variant::parse_list("pca, TPCA-z,pca").unwrap(), vec![Variant::Pca, Variant::TpcaZ]);
        assert!(Variant::parse_list("pca,tpca-q").is_err());
        assert_eq!(parse_dims("50:500:50").unwrap().len(), 10);
        assert_eq!(parse_dims("5,1,5").unwrap(), vec![1, 5]);
        assert!(parse_dims("0:10:5").is_err());
        assert!(parse_dims("10:5").is_err());
    }
}
