//! Catalogs of Steiner triple systems of small order.
//!
//! One representative per isomorphism class is shipped for orders 7, 9, 13
//! and 15 (1, 1, 2 and 80 systems). A directory holding `sts<v>.txt` files
//! can replace the built-in copies; the command-line tool reads it from
//! [`DATA_DIR_ENV`].

use std::path::Path;

use thiserror::Error;

use crate::designs::{parse_sts, DesignError, TripleSystem};

/// Environment variable naming an alternative catalog directory.
pub const DATA_DIR_ENV: &str = "STEINER_MSR_DATA";

/// Orders with a built-in catalog.
pub const BUILTIN_ORDERS: [usize; 4] = [7, 9, 13, 15];

const STS7: &str = include_str!("../data/sts7.txt");
const STS9: &str = include_str!("../data/sts9.txt");
const STS13: &str = include_str!("../data/sts13.txt");
const STS15: &str = include_str!("../data/sts15.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog for order {0}")]
    MissingCatalog(usize),
    #[error("catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog {path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: DesignError,
    },
    #[error("catalog {path} contains a system of order {found}, expected {expected}")]
    WrongOrder { path: String, expected: usize, found: usize },
}

/// Raw text of the built-in catalog for `order`.
pub fn builtin_text(order: usize) -> Option<&'static str> {
    match order {
        7 => Some(STS7),
        9 => Some(STS9),
        13 => Some(STS13),
        15 => Some(STS15),
        _ => None,
    }
}

/// Built-in systems of the given order.
pub fn builtin(order: usize) -> Result<Vec<TripleSystem>, CatalogError> {
    let text = builtin_text(order).ok_or(CatalogError::MissingCatalog(order))?;
    parse_checked(text, order, &format!("<builtin sts{order}>"))
}

/// Systems of the given order from `dir/sts<order>.txt`.
pub fn load_dir(dir: &Path, order: usize) -> Result<Vec<TripleSystem>, CatalogError> {
    let path = dir.join(format!("sts{order}.txt"));
    let shown = path.display().to_string();
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(CatalogError::MissingCatalog(order)),
        Err(source) => return Err(CatalogError::Io { path: shown, source }),
    };
    parse_checked(&text, order, &shown)
}

/// Systems of `order` from `dir` when given, the built-in catalog otherwise.
pub fn load(dir: Option<&Path>, order: usize) -> Result<Vec<TripleSystem>, CatalogError> {
    match dir {
        Some(d) => load_dir(d, order),
        None => builtin(order),
    }
}

fn parse_checked(text: &str, order: usize, path: &str) -> Result<Vec<TripleSystem>, CatalogError> {
    let systems = parse_sts(text).map_err(|source| CatalogError::Invalid { path: path.to_string(), source })?;
    if let Some(bad) = systems.iter().find(|s| s.order() != order) {
        return Err(CatalogError::WrongOrder { path: path.to_string(), expected: order, found: bad.order() });
    }
    if systems.is_empty() {
        return Err(CatalogError::MissingCatalog(order));
    }
    Ok(systems)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        for (order, count) in [(7, 1), (9, 1), (13, 2), (15, 80)] {
            let systems = builtin(order).unwrap();
            assert_eq!(systems.len(), count, "order {order}");
        }
        assert_eq!(builtin(7).unwrap()[0], TripleSystem::fano());
        assert_eq!(builtin(9).unwrap()[0], TripleSystem::affine_plane_9());
        assert!(matches!(builtin(19), Err(CatalogError::MissingCatalog(19))));
    }

    #[test]
    fn directory_loading() {
        let dir = std::env::temp_dir().join(format!("sts-catalog-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("sts7.txt"), STS7).unwrap();
        std::fs::write(dir.join("sts9.txt"), STS7).unwrap();
        assert_eq!(load(Some(&dir), 7).unwrap(), vec![TripleSystem::fano()]);
        assert!(matches!(load(Some(&dir), 9), Err(CatalogError::WrongOrder { expected: 9, found: 7, .. })));
        assert!(matches!(load(Some(&dir), 13), Err(CatalogError::MissingCatalog(13))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
