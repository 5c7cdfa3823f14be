use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Observed `(user, item, rating)` entries with dense indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsMatrix {
    n_users: usize,
    n_items: usize,
    entries: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSummary {
    pub lines: usize,
    pub ratings: usize,
    pub duplicates: usize,
    pub n_users: usize,
    pub n_items: usize,
    pub mean_rating: f64,
}

impl RatingsMatrix {
    /// Builds a matrix from dense-indexed triples. Repeated `(user, item)`
    /// pairs keep the last rating.
    pub fn from_triples(
        n_users: usize,
        n_items: usize,
        triples: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (u, i, r) in triples {
            if u >= n_users || i >= n_items {
                return Err(invalid(format!(
                    "entry ({u}, {i}) outside {n_users}x{n_items}"
                )));
            }
            if !r.is_finite() {
                return Err(invalid(format!("rating for ({u}, {i}) is not finite")));
            }
            match index.get(&(u, i)) {
                Some(&pos) => entries[pos].2 = r,
                None => {
                    index.insert((u, i), entries.len());
                    entries.push((u, i, r));
                }
            }
        }
        if entries.is_empty() {
            return Err(Error::Empty("ratings"));
        }
        Ok(Self {
            n_users,
            n_items,
            entries,
        })
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn mean_rating(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum::<f64>() / self.entries.len() as f64
    }
}

/// Reads `user<delim>item<delim>rating[<delim>...]` lines. User and item
/// identifiers are arbitrary strings, reindexed densely in order of first
/// appearance; extra trailing fields (e.g. timestamps) are ignored. Blank
/// lines are skipped. A repeated `(user, item)` pair keeps its last rating
/// and is counted in the summary.
pub fn ingest_ratings<R: BufRead>(
    reader: R,
    delimiter: &str,
) -> Result<(RatingsMatrix, IngestSummary)> {
    if delimiter.is_empty() {
        return Err(invalid("delimiter must not be empty"));
    }
    let mut users: HashMap<String, usize> = HashMap::new();
    let mut items: HashMap<String, usize> = HashMap::new();
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    let mut triples = Vec::new();
    let mut duplicates = 0;
    let mut lines = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        lines += 1;
        let mut fields = line.split(delimiter).map(str::trim);
        let (Some(user), Some(item), Some(rating)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected user{delimiter}item{delimiter}rating"),
            });
        };
        let rating: f64 = rating.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("rating '{rating}' is not a number"),
        })?;
        if !rating.is_finite() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "rating is not finite".into(),
            });
        }
        let n = users.len();
        let u = *users.entry(user.to_string()).or_insert(n);
        let n = items.len();
        let i = *items.entry(item.to_string()).or_insert(n);
        if seen.insert((u, i), ()).is_some() {
            duplicates += 1;
        }
        triples.push((u, i, rating));
    }
    if triples.is_empty() {
        return Err(Error::Empty("ratings input"));
    }
    let matrix = RatingsMatrix::from_triples(users.len(), items.len(), triples)?;
    if duplicates > 0 {
        log::warn!("{duplicates} repeated (user, item) pairs; kept the last rating of each");
    }
    let summary = IngestSummary {
        lines,
        ratings: matrix.entries.len(),
        duplicates,
        n_users: matrix.n_users,
        n_items: matrix.n_items,
        mean_rating: matrix.mean_rating(),
    };
    log::info!(
        "ingested {} ratings: {} users x {} items, mean {:.4}",
        summary.ratings,
        summary.n_users,
        summary.n_items,
        summary.mean_rating
    );
    Ok((matrix, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_triples() {
        let input = "u1\ta\t4\nu2\ta\t3\nu1\tb\t5\n";
        let (m, s) = ingest_ratings(input.as_bytes(), "\t").unwrap();
        assert_eq!((m.n_users(), m.n_items()), (2, 2));
        assert_eq!(s.ratings, 3);
        assert_eq!(m.entries()[2], (0, 1, 5.0));
    }

    #[test]
    fn duplicates_keep_last() {
        let input = "1\t1\t2\n1\t1\t5\n2\t1\t1\n";
        let (m, s) = ingest_ratings(input.as_bytes(), "\t").unwrap();
        assert_eq!(s.duplicates, 1);
        assert_eq!(m.entries().len(), 2);
        assert_eq!(m.entries()[0], (0, 0, 5.0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match ingest_ratings("1\t1\t2\n1\t2\tgood\n".as_bytes(), "\t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match ingest_ratings("1\t1\n".as_bytes(), "\t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            ingest_ratings("\n\n".as_bytes(), "\t"),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn other_delimiters_and_extra_fields() {
        let input = "1::10::4::978300760\n2::10::3::978300761\n";
        let (m, _) = ingest_ratings(input.as_bytes(), "::").unwrap();
        assert_eq!((m.n_users(), m.n_items()), (2, 1));
        let (m, _) = ingest_ratings("1,2,3.5\n".as_bytes(), ",").unwrap();
        assert_eq!(m.entries()[0].2, 3.5);
    }
}
