//! Client event streams: `insert <id> <coords...>`, `delete <id>`, `cost?`
//! and `solution?`, one per line, `#` starting a comment.

use crate::error::{Error, Result};
use crate::metric::{Metric, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Insert { id: String, point: Point },
    Delete { id: String },
    CostQuery,
    SolutionQuery,
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::Insert { .. } => "insert",
            Event::Delete { .. } => "delete",
            Event::CostQuery => "cost",
            Event::SolutionQuery => "solution",
        }
    }

    pub fn to_line(&self, metric: &Metric) -> String {
        match self {
            Event::Insert { id, point } => format!("insert {id} {}", metric.format_point(point)),
            Event::Delete { id } => format!("delete {id}"),
            Event::CostQuery => "cost?".into(),
            Event::SolutionQuery => "solution?".into(),
        }
    }
}

pub fn parse_events(text: &str, metric: &Metric) -> Result<Vec<Event>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: String| Error::parse(i + 1, msg);
        let ev = match toks.as_slice() {
            [] => continue,
            ["insert", id, coords @ ..] if !coords.is_empty() => Event::Insert {
                id: id.to_string(),
                point: metric.parse_point(coords).map_err(|e| bad(e.to_string()))?,
            },
            ["delete", id] => Event::Delete { id: id.to_string() },
            ["cost?"] => Event::CostQuery,
            ["solution?"] => Event::SolutionQuery,
            _ => return Err(bad(format!("malformed event `{}`", line.trim()))),
        };
        out.push(ev);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        let m = Metric::euclidean(2).unwrap();
        let evs =
            parse_events("insert a 1 2\n# c\ncost?\n\ndelete a\nsolution? # q\n", &m).unwrap();
        assert_eq!(
            evs,
            vec![
                Event::Insert {
                    id: "a".into(),
                    point: Point::Coords(vec![1.0, 2.0])
                },
                Event::CostQuery,
                Event::Delete { id: "a".into() },
                Event::SolutionQuery,
            ]
        );
        assert_eq!(evs[0].to_line(&m), "insert a 1 2");
    }

    #[test]
    fn rejects_bad_lines() {
        let m = Metric::euclidean(1).unwrap();
        assert_eq!(
            parse_events("cost?\ninsert a\n", &m).unwrap_err(),
            Error::parse(2, "malformed event `insert a`")
        );
        assert!(matches!(
            parse_events("insert a 1 2\n", &m).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }
}
