//! Line-oriented text formats for instances and tours.
//!
//! ```text
//! p12tsp 5
//! # comment
//! e 0 1
//! e 1 2
//! ```
//!
//! ```text
//! tour 5
//! 0 1 2 3 4
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Vertex};
use crate::tour::Tour;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<usize> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| parse_err(1, format!("missing `{keyword} <n>` header")))?;
    let mut fields = line.split_whitespace();
    if fields.next() != Some(keyword) {
        return Err(parse_err(no, format!("expected `{keyword} <n>` header")));
    }
    let n = fields
        .next()
        .ok_or_else(|| parse_err(no, "header lacks the vertex count"))?
        .parse::<usize>()
        .map_err(|e| parse_err(no, format!("bad vertex count: {e}")))?;
    if fields.next().is_some() {
        return Err(parse_err(no, "trailing fields after header"));
    }
    Ok(n)
}

fn parse_vertex(no: usize, field: &str) -> Result<Vertex> {
    field
        .parse::<Vertex>()
        .map_err(|e| parse_err(no, format!("bad vertex id `{field}`: {e}")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "p12tsp")?;
    let mut edges = BTreeSet::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [tag, u, v] = fields[..] else {
            return Err(parse_err(no, "expected `e <u> <v>`"));
        };
        if tag != "e" {
            return Err(parse_err(no, format!("unknown record `{tag}`")));
        }
        let (u, v) = (parse_vertex(no, u)?, parse_vertex(no, v)?);
        if u >= v {
            return Err(parse_err(
                no,
                format!("edge endpoints must satisfy u < v, got {u} {v}"),
            ));
        }
        if v >= n {
            return Err(parse_err(
                no,
                format!("vertex {v} is out of range for n = {n}"),
            ));
        }
        if !edges.insert(Edge::new(u, v)) {
            return Err(parse_err(no, format!("duplicate edge ({u},{v})")));
        }
    }
    Instance::new(n, edges).map_err(|e| parse_err(1, e.to_string()))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = format!("p12tsp {}\n", instance.n());
    for e in instance.cost1_edges() {
        writeln!(out, "e {} {}", e.lo(), e.hi()).unwrap();
    }
    out
}

pub fn parse_tour(text: &str) -> Result<Tour> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "tour")?;
    let mut order = Vec::with_capacity(n);
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        for field in line.split_whitespace() {
            order.push(parse_vertex(no, field)?);
        }
    }
    Tour::new(n, order).map_err(|e| parse_err(last, e.to_string()))
}

pub fn write_tour(tour: &Tour) -> String {
    let ids: Vec<String> = tour.order().iter().map(|v| v.to_string()).collect();
    format!("tour {}\n{}\n", tour.len(), ids.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_roundtrip() {
        let inst = Instance::new(6, [(0, 1), (2, 5), (3, 4)]).unwrap();
        let text = write_instance(&inst);
        assert_eq!(text, "p12tsp 6\ne 0 1\ne 2 5\ne 3 4\n");
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn comments_and_blank_lines() {
        let inst = parse_instance("# hexa\n\np12tsp 6 # header\ne 1 2\n\ne 0 2 # chord\n").unwrap();
        assert_eq!(inst.cost1_edges().len(), 2);
        assert_eq!(inst.cost(0, 2), 1);
    }

    #[test]
    fn instance_errors_carry_line_numbers() {
        let line = |text: &str| match parse_instance(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(line("p12tsp 5\ne 0 1\ne 0 1\n"), 3);
        assert_eq!(line("p12tsp 5\ne 1 0\n"), 2);
        assert_eq!(line("p12tsp 5\ne 1 5\n"), 2);
        assert_eq!(line("p12tsp 5\n\nx 1 2\n"), 3);
        assert_eq!(line("tour 5\n"), 1);
        assert_eq!(line(""), 1);
    }

    #[test]
    fn tour_roundtrip() {
        let t = Tour::new(5, vec![0, 3, 1, 4, 2]).unwrap();
        let text = write_tour(&t);
        assert_eq!(text, "tour 5\n0 3 1 4 2\n");
        assert_eq!(parse_tour(&text).unwrap(), t);
        assert_eq!(parse_tour("tour 5\n0 3\n1 4\n2\n").unwrap(), t);
        assert!(parse_tour("tour 5\n0 3 1 4\n").is_err());
        assert!(parse_tour("tour 5\n0 3 1 4 4\n").is_err());
    }
}
