use std::fmt::Write as _;

use super::{
    end_position, parse_bit, parse_id, parse_rational, parse_usize, significant_lines, Line,
    ParseError, ParseResult, Token,
};
use crate::error::Result;
use crate::model::{Fbdd, FbddGraph, Layer, Mlp, Model, Perceptron, RawEdge, RawKind, RawNode, Rational};

struct Cursor<'a> {
    lines: std::vec::IntoIter<Line<'a>>,
    eof: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { lines: significant_lines(text).into_iter(), eof: end_position(text) }
    }

    fn eof_error(&self, expected: &str) -> ParseError {
        ParseError::at(self.eof.0, self.eof.1, "unexpected end of input").expecting(expected.to_string())
    }

    /// Next line, which must start with `keyword`.
    fn keyword(&mut self, keyword: &str) -> ParseResult<Line<'a>> {
        let line = self.lines.next().ok_or_else(|| self.eof_error(&format!("`{keyword}`")))?;
        let head = line.tokens[0];
        if head.text != keyword {
            return Err(head
                .error(format!("unexpected token {:?}", head.text))
                .expecting(format!("`{keyword}`")));
        }
        Ok(line)
    }

    fn finish(mut self) -> ParseResult<()> {
        match self.lines.next() {
            None => Ok(()),
            Some(line) => Err(line.tokens[0]
                .error(format!("unexpected token {:?}", line.tokens[0].text))
                .expecting("end of input")),
        }
    }

    /// `<keyword> <int>` with the integer at least 1.
    fn positive(&mut self, keyword: &str, what: &str) -> ParseResult<usize> {
        let line = self.keyword(keyword)?;
        let tok = line.args(1, what)?[0];
        let value = parse_usize(&tok, what)?;
        if value == 0 {
            return Err(tok.error(format!("{what} must be at least 1")));
        }
        Ok(value)
    }
}

fn rationals(tokens: &[Token<'_>]) -> ParseResult<Vec<Rational>> {
    tokens.iter().map(parse_rational).collect()
}

/// Parses any of the three model formats and validates the result.
/// Syntax errors surface as [`crate::Error::Parse`]; structural problems
/// as [`crate::Error::InvalidFbdd`] or [`crate::Error::InvalidMlp`].
pub fn parse_model(text: &str) -> Result<Model> {
    let mut cursor = Cursor::new(text);
    let header = cursor
        .lines
        .next()
        .ok_or_else(|| cursor.eof_error("`perceptron`, `fbdd` or `mlp`"))?;
    header.args(0, "arguments")?;
    match header.tokens[0].text {
        "perceptron" => Ok(parse_perceptron(cursor)?.into()),
        "fbdd" => Ok(parse_fbdd_body(cursor)?.build()?.into()),
        "mlp" => {
            let (n, layers) = parse_mlp_body(cursor)?;
            Ok(Mlp::new(n, layers)?.into())
        }
        other => Err(header.tokens[0]
            .error(format!("unknown model kind {other:?}"))
            .expecting("`perceptron`, `fbdd` or `mlp`")
            .into()),
    }
}

/// Parses an FBDD file without validating its structure.
pub fn parse_fbdd_graph(text: &str) -> ParseResult<FbddGraph> {
    let mut cursor = Cursor::new(text);
    cursor.keyword("fbdd")?.args(0, "arguments")?;
    parse_fbdd_body(cursor)
}

fn parse_perceptron(mut cursor: Cursor<'_>) -> Result<Perceptron> {
    let n = cursor.positive("n", "feature count")?;
    let weights = rationals(cursor.keyword("w")?.args(n, "weights")?)?;
    let bias = parse_rational(&cursor.keyword("b")?.args(1, "bias")?[0])?;
    cursor.finish()?;
    Perceptron::new(weights, bias)
}

fn parse_fbdd_body(mut cursor: Cursor<'_>) -> ParseResult<FbddGraph> {
    let n = cursor.positive("n", "feature count")?;
    let root = parse_id(&cursor.keyword("root")?.args(1, "node id")?[0])?;
    let mut graph = FbddGraph::new(n, root);
    for line in cursor.lines {
        let head = line.tokens[0];
        match head.text {
            "node" => {
                let args = line.args(2, "arguments (id, feature)")?;
                let id = parse_id(&args[0])?;
                let feature = parse_usize(&args[1], "feature")?;
                graph.nodes.push(RawNode { id: id.into(), kind: RawKind::Internal(feature) });
            }
            "leaf" => {
                let args = line.args(2, "arguments (id, class)")?;
                let id = parse_id(&args[0])?;
                let class = parse_bit(&args[1])?;
                graph.nodes.push(RawNode { id: id.into(), kind: RawKind::Leaf(class) });
            }
            "edge" => {
                let args = line.args(3, "arguments (from, label, to)")?;
                let from = parse_id(&args[0])?;
                let label = parse_bit(&args[1])?;
                let to = parse_id(&args[2])?;
                graph.edges.push(RawEdge { from: from.into(), label, to: to.into() });
            }
            other => {
                return Err(head
                    .error(format!("unexpected token {other:?}"))
                    .expecting("`node`, `leaf` or `edge`"))
            }
        }
    }
    Ok(graph)
}

fn parse_mlp_body(mut cursor: Cursor<'_>) -> ParseResult<(usize, Vec<Layer>)> {
    let n = cursor.positive("n", "feature count")?;
    let k = cursor.positive("layers", "layer count")?;
    // `k` is untrusted; grow with the input instead of reserving.
    let mut layers = Vec::new();
    for _ in 0..k {
        let line = cursor.keyword("layer")?;
        let args = line.args(2, "dimensions (in, out)")?;
        let dims = [parse_usize(&args[0], "input width")?, parse_usize(&args[1], "output width")?];
        for (tok, d) in args.iter().zip(dims) {
            if d == 0 {
                return Err(tok.error("layer width must be at least 1"));
            }
        }
        let [inputs, outputs] = dims;
        let mut weights = Vec::new();
        for _ in 0..inputs {
            let row = cursor.lines.next().ok_or_else(|| cursor.eof_error("a weight row"))?;
            if row.tokens.len() != outputs {
                let message = format!("weight row has {} entries", row.tokens.len());
                let err = match row.tokens.get(outputs) {
                    Some(extra) => extra.error(message),
                    None => row.error_at_end(message),
                };
                return Err(err.expecting(format!("{outputs} rationals")));
            }
            weights.push(rationals(&row.tokens)?);
        }
        let bias = rationals(cursor.keyword("bias")?.args(outputs, "biases")?)?;
        layers.push(Layer { weights, bias });
    }
    cursor.finish()?;
    Ok((n, layers))
}

fn join(values: &[Rational]) -> String {
    values.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

/// Inverse of [`parse_model`]; node ids are kept verbatim.
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    match model {
        Model::Perceptron(p) => {
            let _ = write!(
                out,
                "perceptron\nn {}\nw {}\nb {}\n",
                p.feature_count(),
                join(p.weights()),
                p.bias()
            );
        }
        Model::Fbdd(f) => serialize_fbdd(f, &mut out),
        Model::Mlp(m) => {
            let _ = write!(out, "mlp\nn {}\nlayers {}\n", m.feature_count(), m.layers().len());
            for layer in m.layers() {
                let _ = writeln!(out, "layer {} {}", layer.in_dim(), layer.out_dim());
                for row in &layer.weights {
                    let _ = writeln!(out, "{}", join(row));
                }
                let _ = writeln!(out, "bias {}", join(&layer.bias));
            }
        }
    }
    out
}

fn serialize_fbdd(fbdd: &Fbdd, out: &mut String) {
    let graph = fbdd.to_graph();
    let _ = write!(out, "fbdd\nn {}\nroot {}\n", graph.feature_count, graph.root);
    for node in &graph.nodes {
        let _ = match node.kind {
            RawKind::Internal(f) => writeln!(out, "node {} {f}", node.id),
            RawKind::Leaf(c) => writeln!(out, "leaf {} {}", node.id, u8::from(c)),
        };
    }
    for e in &graph.edges {
        let _ = writeln!(out, "edge {} {} {}", e.from, u8::from(e.label), e.to);
    }
}
