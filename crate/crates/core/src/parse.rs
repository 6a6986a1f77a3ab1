//! Line-oriented text formats for graphs and divisors.
//!
//! Graphs:
//!
//! ```text
//! # theta graph
//! vertex u
//! vertex v
//! edge e1 u v 1/1
//! ```
//!
//! Divisors:
//!
//! ```text
//! chip 2 at u
//! chip -1 on e1 1/2
//! ```

use num_traits::Signed;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::metric::{format_rational, MetricDivisor, MetricGraph, Rational};

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
    end: usize,
}

impl<'a> Line<'a> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> Error {
        Error::Parse(ParseError {
            line: self.number,
            column,
            kind,
        })
    }

    fn field(&self, i: usize, what: &'static str) -> Result<(usize, &'a str)> {
        self.tokens
            .get(i)
            .copied()
            .ok_or_else(|| self.err(self.end, ParseErrorKind::MissingField(what)))
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        match self.tokens.get(n) {
            Some(&(col, tok)) => Err(self.err(col, ParseErrorKind::TrailingInput(tok.to_string()))),
            None => Ok(()),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((s + 1, &content[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &content[s..]));
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            tokens,
            end: content.trim_end().len() + 1,
        })
    })
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    (den != 0).then(|| Rational::new(num, den))
}

pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    let mut b = MetricGraph::builder();
    for line in lines(text) {
        let (col, directive) = line.tokens[0];
        match directive {
            "vertex" => {
                let (c, name) = line.field(1, "vertex name")?;
                line.expect_len(2)?;
                if b.has_vertex(name) {
                    return Err(line.err(c, ParseErrorKind::DuplicateVertex(name.into())));
                }
                b.vertex(name)?;
            }
            "edge" => {
                let (cn, name) = line.field(1, "edge name")?;
                let (ca, a) = line.field(2, "first endpoint")?;
                let (cb, v) = line.field(3, "second endpoint")?;
                let (cl, len) = line.field(4, "edge length")?;
                line.expect_len(5)?;
                if b.has_edge(name) {
                    return Err(line.err(cn, ParseErrorKind::DuplicateEdge(name.into())));
                }
                for (c, end) in [(ca, a), (cb, v)] {
                    if !b.has_vertex(end) {
                        return Err(line.err(c, ParseErrorKind::UnknownVertex(end.into())));
                    }
                }
                let length = parse_rational(len)
                    .ok_or_else(|| line.err(cl, ParseErrorKind::BadNumber(len.into())))?;
                if !length.is_positive() {
                    return Err(line.err(cl, ParseErrorKind::NonPositiveLength(len.into())));
                }
                b.edge(name, a, v, length)?;
            }
            other => return Err(line.err(col, ParseErrorKind::UnknownDirective(other.into()))),
        }
    }
    b.build()
}

/// Parses a divisor on `graph`. Repeated points accumulate; offsets equal
/// to `0` or the edge length name the endpoints.
pub fn parse_divisor(text: &str, graph: &MetricGraph) -> Result<MetricDivisor> {
    let mut d = MetricDivisor::zero();
    for line in lines(text) {
        let (col, directive) = line.tokens[0];
        if directive != "chip" {
            return Err(line.err(col, ParseErrorKind::UnknownDirective(directive.into())));
        }
        let (cc, coeff) = line.field(1, "coefficient")?;
        let coeff: i64 = coeff
            .parse()
            .map_err(|_| line.err(cc, ParseErrorKind::BadNumber(coeff.into())))?;
        let (ck, keyword) = line.field(2, "`at` or `on`")?;
        let point = match keyword {
            "at" => {
                let (cv, v) = line.field(3, "vertex name")?;
                line.expect_len(4)?;
                graph
                    .vertex_point(v)
                    .map_err(|_| line.err(cv, ParseErrorKind::UnknownVertex(v.into())))?
            }
            "on" => {
                let (ce, e) = line.field(3, "edge name")?;
                let (co, off) = line.field(4, "offset")?;
                line.expect_len(5)?;
                let id = graph
                    .edge_id(e)
                    .ok_or_else(|| line.err(ce, ParseErrorKind::UnknownEdge(e.into())))?;
                let offset = parse_rational(off)
                    .ok_or_else(|| line.err(co, ParseErrorKind::BadNumber(off.into())))?;
                graph.edge_point_by_id(id, offset).map_err(|_| {
                    line.err(
                        co,
                        ParseErrorKind::OffsetOutOfRange {
                            edge: e.into(),
                            offset: format_rational(&offset),
                            length: format_rational(&graph.edges()[id].length),
                        },
                    )
                })?
            }
            other => {
                return Err(line.err(ck, ParseErrorKind::UnknownDirective(other.into())));
            }
        };
        d.add_chips(point, coeff);
    }
    Ok(d)
}

/// Serializes a graph in the format read by [`parse_graph`].
pub fn write_graph(graph: &MetricGraph) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.name,
            graph.vertices()[e.a],
            graph.vertices()[e.b],
            format_rational(&e.length)
        ));
    }
    out
}
