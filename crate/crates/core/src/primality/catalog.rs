use std::fmt;
use std::path::Path;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{is_prime, is_prime_u64, PrimalityPolicy};
use crate::seq::{fib, lucas, Index};

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/prime_indices.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{kind} index {index} is duplicated")]
    Duplicate { kind: SeqKind, index: Index },
    #[error("{kind} index {index} is out of order (previous entry {previous})")]
    OutOfOrder { kind: SeqKind, index: Index, previous: Index },
    #[error("{kind} index {index} is listed but its value is not prime")]
    NotPrime { kind: SeqKind, index: Index },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    Fib,
    Lucas,
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqKind::Fib => "fib",
            SeqKind::Lucas => "lucas",
        })
    }
}

/// Known indices of Fibonacci and Lucas primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCatalog {
    fib_prime_indices: Vec<Index>,
    lucas_prime_indices: Vec<Index>,
    source: String,
}

impl PrimeCatalog {
    /// Parses the line format and validates the result.
    pub fn parse(text: &str, source: impl Into<String>) -> Result<Self, CatalogError> {
        let mut fib_prime_indices = Vec::new();
        let mut lucas_prime_indices = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (kind, index) = match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(ix), None) => (k, ix),
                _ => {
                    return Err(CatalogError::Parse {
                        line: line_no,
                        message: format!("expected `fib <index>` or `lucas <index>`, found {line:?}"),
                    })
                }
            };
            let index: Index = index.parse().map_err(|_| CatalogError::Parse {
                line: line_no,
                message: format!("invalid index {index:?}"),
            })?;
            match kind {
                "fib" => fib_prime_indices.push(index),
                "lucas" => lucas_prime_indices.push(index),
                other => {
                    return Err(CatalogError::Parse {
                        line: line_no,
                        message: format!("unknown sequence {other:?}"),
                    })
                }
            }
        }
        let catalog = PrimeCatalog { fib_prime_indices, lucas_prime_indices, source: source.into() };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CATALOG, "bundled").expect("bundled catalog is valid")
    }

    pub fn from_indices(fib: Vec<Index>, lucas: Vec<Index>, source: impl Into<String>) -> Result<Self, CatalogError> {
        let catalog = PrimeCatalog { fib_prime_indices: fib, lucas_prime_indices: lucas, source: source.into() };
        catalog.validate()?;
        Ok(catalog)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        for (kind, list) in [(SeqKind::Fib, &self.fib_prime_indices), (SeqKind::Lucas, &self.lucas_prime_indices)] {
            for pair in list.windows(2) {
                if pair[0] == pair[1] {
                    return Err(CatalogError::Duplicate { kind, index: pair[1] });
                }
                if pair[0] > pair[1] {
                    return Err(CatalogError::OutOfOrder { kind, index: pair[1], previous: pair[0] });
                }
            }
            for &index in list {
                let value = match kind {
                    SeqKind::Fib => fib(index),
                    SeqKind::Lucas => lucas(index),
                };
                match value.to_u64() {
                    Some(v) => {
                        if !is_prime_u64(v) {
                            return Err(CatalogError::NotPrime { kind, index });
                        }
                    }
                    // list is sorted, so every later value is larger still
                    None => break,
                }
            }
        }
        Ok(())
    }

    pub fn fib_prime_indices(&self) -> &[Index] {
        &self.fib_prime_indices
    }

    pub fn lucas_prime_indices(&self) -> &[Index] {
        &self.lucas_prime_indices
    }

    pub fn indices(&self, kind: SeqKind) -> &[Index] {
        match kind {
            SeqKind::Fib => &self.fib_prime_indices,
            SeqKind::Lucas => &self.lucas_prime_indices,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn contains(&self, kind: SeqKind, index: Index) -> bool {
        self.indices(kind).binary_search(&index).is_ok()
    }

    /// Catalog with one index removed; used to exercise degraded inputs.
    pub fn without(&self, kind: SeqKind, index: Index) -> Self {
        let mut out = self.clone();
        match kind {
            SeqKind::Fib => out.fib_prime_indices.retain(|&i| i != index),
            SeqKind::Lucas => out.lucas_prime_indices.retain(|&i| i != index),
        }
        out.source = format!("{} without {kind} {index}", self.source);
        out
    }
}

pub fn catalog_load(path: impl AsRef<Path>) -> Result<PrimeCatalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    PrimeCatalog::parse(&text, path.display().to_string())
}

fn member(kind: SeqKind, k: Index, catalog: &PrimeCatalog, recheck: bool, policy: &PrimalityPolicy) -> bool {
    if !catalog.contains(kind, k) {
        return false;
    }
    if !recheck {
        return true;
    }
    let value = match kind {
        SeqKind::Fib => fib(k),
        SeqKind::Lucas => lucas(k),
    };
    is_prime(&value, policy).is_prime_like()
}

/// Catalog membership of `F(k)`, optionally confirmed by a primality test.
pub fn is_fib_prime(k: Index, catalog: &PrimeCatalog, recheck: bool, policy: &PrimalityPolicy) -> bool {
    member(SeqKind::Fib, k, catalog, recheck, policy)
}

pub fn is_lucas_prime(k: Index, catalog: &PrimeCatalog, recheck: bool, policy: &PrimalityPolicy) -> bool {
    member(SeqKind::Lucas, k, catalog, recheck, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingests_listed_indices() {
        let c = PrimeCatalog::parse("fib 3\nfib 4\nfib 5 # comment\nfib 7\n\nfib 11\nfib 13\n", "t").unwrap();
        assert_eq!(c.fib_prime_indices(), &[3, 4, 5, 7, 11, 13]);
        assert!(c.lucas_prime_indices().is_empty());
    }

    #[test]
    fn duplicate_is_rejected_by_index() {
        let err = PrimeCatalog::parse("fib 3\nfib 5\nfib 5\n", "t").unwrap_err();
        assert!(matches!(err, CatalogError::Duplicate { kind: SeqKind::Fib, index: 5 }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = PrimeCatalog::parse("fib 3\n\nfib x\n", "t").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 3, .. }), "{err}");
        let err = PrimeCatalog::parse("fib 3\nmersenne 7\n", "t").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn composite_word_entry_rejected() {
        let err = PrimeCatalog::parse("fib 3\nfib 12\n", "t").unwrap_err();
        assert!(matches!(err, CatalogError::NotPrime { kind: SeqKind::Fib, index: 12 }));
    }

    #[test]
    fn bundled_contains_table_indices() {
        let c = PrimeCatalog::bundled();
        for k in [3, 5, 7, 11, 13, 17, 23, 29, 43, 47, 131, 137, 431, 433, 569, 571] {
            assert!(c.contains(SeqKind::Fib, k), "fib {k}");
        }
        for k in [5, 7, 11, 13, 17, 19, 31, 37, 41, 47, 53, 613, 617, 4787, 4793] {
            assert!(c.contains(SeqKind::Lucas, k), "lucas {k}");
        }
    }

    #[test]
    fn membership_examples() {
        let c = PrimeCatalog::bundled();
        let policy = PrimalityPolicy::default();
        assert!(is_fib_prime(13, &c, false, &policy));
        assert!(!is_fib_prime(12, &c, false, &policy));
        assert!(is_fib_prime(431, &c, true, &policy));
        assert!(is_lucas_prime(7, &c, false, &policy));
        assert!(!is_lucas_prime(6, &c, false, &policy));
        assert!(is_lucas_prime(613, &c, true, &policy));
    }
}
