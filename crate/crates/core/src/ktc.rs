//! The `.ktc` text format.
//!
//! ```text
//! ktree <k> <n>
//! <k vertex ids>      # one line per vertex k, k+1, ..., n-1
//! ```
//!
//! Line `t` after the header holds the attachment clique of vertex `k + t`;
//! every id on it must be `< k + t`. Lines starting with `#` are comments.
//! A stream of instances separates blocks with blank lines.

use crate::error::{Error, Result};
use crate::ktree::KTreeInstance;

pub fn parse_ktc(text: &str) -> Result<KTreeInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut attachments = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        match header {
            None => header = Some(parse_header(line, line_no)?),
            Some((k, _)) => {
                let vertex = k + attachments.len();
                let ids = parse_ids(line, line_no, k)?;
                if let Some(&bad) = ids.iter().find(|&&u| u >= vertex) {
                    return Err(Error::ForwardReference {
                        line: line_no,
                        vertex: bad,
                    });
                }
                attachments.push(ids);
                lines.push(line_no);
            }
        }
    }
    let Some((k, n)) = header else {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `ktree <k> <n>` header".into(),
        });
    };
    if n < k || attachments.len() != n - k {
        return Err(Error::CountMismatch {
            k,
            declared: n,
            found: attachments.len(),
        });
    }
    KTreeInstance::build(k, attachments, |t| lines[t])
}

/// Parses a blank-line separated sequence of `.ktc` blocks.
pub fn parse_ktc_stream(text: &str) -> Result<Vec<KTreeInstance>> {
    let mut out = Vec::new();
    let mut block = String::new();
    let mut block_start = 0;
    let flush = |block: &mut String, start: usize, out: &mut Vec<KTreeInstance>| -> Result<()> {
        let has_content = block
            .lines()
            .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        if has_content {
            out.push(parse_ktc(block).map_err(|e| shift_line(e, start))?);
        }
        block.clear();
        Ok(())
    };
    for (offset, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            flush(&mut block, block_start, &mut out)?;
            block_start = offset + 1;
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    flush(&mut block, block_start, &mut out)?;
    Ok(out)
}

fn shift_line(err: Error, by: usize) -> Error {
    match err {
        Error::Syntax {
            line,
            column,
            message,
        } => Error::Syntax {
            line: line + by,
            column,
            message,
        },
        Error::NotAClique { line, set } => Error::NotAClique {
            line: line + by,
            set,
        },
        Error::ForwardReference { line, vertex } => Error::ForwardReference {
            line: line + by,
            vertex,
        },
        other => other,
    }
}

pub fn serialize_ktc(t: &KTreeInstance) -> String {
    let mut out = format!("ktree {} {}\n", t.k(), t.n());
    for set in t.attachments() {
        let ids: Vec<String> = set.iter().map(usize::to_string).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let tokens = tokens_with_columns(line);
    let syntax = |column: usize, message: &str| Error::Syntax {
        line: line_no,
        column,
        message: message.into(),
    };
    match tokens.as_slice() {
        [(_, "ktree"), (ck, k), (cn, n)] => {
            let k: usize = k.parse().map_err(|_| syntax(*ck, "expected integer k"))?;
            let n: usize = n.parse().map_err(|_| syntax(*cn, "expected integer n"))?;
            if k == 0 {
                return Err(syntax(*ck, "k must be positive"));
            }
            Ok((k, n))
        }
        [(c, word), ..] if *word != "ktree" => Err(syntax(*c, "expected `ktree`")),
        _ => Err(syntax(1, "expected `ktree <k> <n>`")),
    }
}

fn parse_ids(line: &str, line_no: usize, k: usize) -> Result<Vec<usize>> {
    let tokens = tokens_with_columns(line);
    let mut ids = Vec::with_capacity(k);
    for (column, tok) in &tokens {
        let id = tok.parse::<usize>().map_err(|_| Error::Syntax {
            line: line_no,
            column: *column,
            message: format!("expected vertex id, found `{tok}`"),
        })?;
        ids.push(id);
    }
    if ids.len() != k {
        let column = tokens.get(k).map_or(line.len() + 1, |t| t.0);
        return Err(Error::Syntax {
            line: line_no,
            column,
            message: format!("expected {k} vertex ids, found {}", ids.len()),
        });
    }
    Ok(ids)
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_four_vertex_2tree() {
        let t = parse_ktc("ktree 2 4\n0 1\n0 1").unwrap();
        assert_eq!((t.k(), t.n()), (2, 4));
        assert_eq!(t.edge_count(), 5);
        assert!(!t.is_adjacent(2, 3));
    }

    #[test]
    fn parses_triangle_and_comments() {
        let t = parse_ktc("# a triangle\nktree 2 3\n# apex\n0 1\n").unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn forward_reference_reports_the_line() {
        assert_eq!(
            parse_ktc("ktree 2 4\n0 1\n0 3"),
            Err(Error::ForwardReference { line: 3, vertex: 3 })
        );
        assert_eq!(
            parse_ktc("ktree 2 4\n# c\n0 1\n0 3"),
            Err(Error::ForwardReference { line: 4, vertex: 3 })
        );
    }

    #[test]
    fn other_errors() {
        assert!(matches!(
            parse_ktc("ktree 2 5\n0 1\n0 1"),
            Err(Error::CountMismatch {
                declared: 5,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_ktc("ktree 2 3\n0 x"),
            Err(Error::Syntax {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            parse_ktc("tree 2 3\n0 1"),
            Err(Error::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_ktc("ktree 2 5\n0 1\n0 1\n2 3"),
            Err(Error::NotAClique { line: 4, .. })
        ));
        assert!(matches!(
            parse_ktc("ktree 2 3\n0 1 2"),
            Err(Error::Syntax {
                line: 2,
                column: 5,
                ..
            })
        ));
    }

    #[test]
    fn serializes_small_cases() {
        let tri = KTreeInstance::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(serialize_ktc(&tri), "ktree 2 3\n0 1\n");
        let k2 = KTreeInstance::base(2).unwrap();
        assert_eq!(serialize_ktc(&k2), "ktree 2 2\n");
    }

    #[test]
    fn stream_round_trip() {
        let text = "ktree 1 1\n\nktree 2 3\n0 1\n\n\nktree 2 4\n0 1\n1 2\n";
        let all = parse_ktc_stream(text).unwrap();
        assert_eq!(all.len(), 3);
        let again: Vec<String> = all.iter().map(serialize_ktc).collect();
        assert_eq!(parse_ktc_stream(&again.join("\n")).unwrap(), all);
        assert!(matches!(
            parse_ktc_stream("ktree 2 3\n0 1\n\nktree 2 4\n0 1\n0 3\n"),
            Err(Error::ForwardReference { line: 6, .. })
        ));
    }
}
