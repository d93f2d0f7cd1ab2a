//! Text formats for the objects the CLI moves around: structure files,
//! dg algebra files, coalgebra files, morphism files, and elements given
//! on the command line.  Parse errors carry the file label, line, and
//! column of the offending token.
//!
//! Structure file:
//! ```text
//! field Q
//! basis u 0 1
//! basis v 1 2
//! Q 0 -> 1 v
//! Q 2 u u -> -1 v
//! ```
//!
//! Dg algebra file: `basis <name> <degree>`, one `unit` line per unit
//! term, `mul <a> <b> -> <terms>`, `d <a> -> <terms>`.  Coalgebra file:
//! `basis <name> <degree> <weight>`, `coproduct <a> -> <coeff> <left>
//! <right>, ...`, `d <a> -> <terms>`, and an optional bare `relaxed`
//! line to skip the conilpotency checks.  Morphism file: `F <arity>
//! <inputs> -> <terms>` with inputs named in the source and outputs in
//! the target.  Omitted tables are zero everywhere.
//!
//! Elements use the display syntax of the kernel: `u + 2*v - 1/2*w`, or
//! `0` for zero.

use std::fmt;
use std::sync::Arc;

use ainfty::convolution::CoalgebraBuilder;
use ainfty::field::parse_scalar;
use ainfty::tensor::{ComponentFamily, MorphismComponents};
use ainfty::{
    AInftyStructure, BasisVector, ConilpotentCoalgebra, DgAlgebra, DgAlgebraBuilder, Element,
    FieldSpec, GradedSpace, InftyMorphism, Scalar, TensorWord,
};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.file, self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

/// One whitespace token with the 1-based column it starts at.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut column = 1;
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some((c, s)) = start.take() {
                out.push((c, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some((column, i));
        }
        column += 1;
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect()
}

struct LineCursor<'a> {
    file: &'a str,
    line_no: usize,
    line: &'a str,
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn new(file: &'a str, line_no: usize, line: &'a str) -> LineCursor<'a> {
        LineCursor {
            file,
            line_no,
            line,
            tokens: tokens(line),
            pos: 0,
        }
    }

    fn error_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            file: self.file.to_string(),
            line: self.line_no,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.line.chars().count() + 1
    }

    fn next(&mut self, what: &str) -> PResult<(usize, &'a str)> {
        match self.tokens.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error_at(self.end_column(), format!("expected {what}"))),
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.tokens.get(self.pos).copied()
    }

    fn finish(&self) -> PResult<()> {
        match self.tokens.get(self.pos) {
            Some(&(c, t)) => Err(self.error_at(c, format!("unexpected trailing '{t}'"))),
            None => Ok(()),
        }
    }

    fn scalar(&mut self, field: &FieldSpec) -> PResult<Scalar> {
        let (col, tok) = self.next("a coefficient")?;
        parse_scalar(field, tok).map_err(|_| self.error_at(col, format!("bad coefficient '{tok}'")))
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> PResult<T> {
        let (col, tok) = self.next(what)?;
        tok.parse()
            .map_err(|_| self.error_at(col, format!("bad {what} '{tok}'")))
    }

    /// The terms after an arrow: `<coeff> <name> [<name>...]` groups
    /// separated by commas, each group carrying `names` name tokens.
    fn term_list(&mut self, field: &FieldSpec, names: usize) -> PResult<Vec<(Scalar, Vec<(usize, &'a str)>)>> {
        let mut out = Vec::new();
        loop {
            let coeff = self.scalar(field)?;
            let mut group = Vec::with_capacity(names);
            for k in 0..names {
                let (col, mut tok) = self.next("a basis name")?;
                let last = k + 1 == names;
                let more = last && tok.ends_with(',');
                if more {
                    tok = &tok[..tok.len() - 1];
                    if tok.is_empty() {
                        return Err(self.error_at(col, "expected a basis name before ','"));
                    }
                }
                group.push((col, tok));
                if more {
                    out.push((coeff, group));
                    if self.peek().is_none() {
                        let c = self.end_column();
                        return Err(self.error_at(c, "expected a term after ','"));
                    }
                    break;
                }
                if last {
                    out.push((coeff, group));
                    if self.peek().is_some() {
                        let (c, t) = self.peek().unwrap();
                        return Err(self.error_at(c, format!("expected ',' before '{t}'")));
                    }
                    return Ok(out);
                }
            }
        }
    }

    fn arrow(&mut self) -> PResult<()> {
        let (col, tok) = self.next("'->'")?;
        if tok == "->" {
            Ok(())
        } else {
            Err(self.error_at(col, format!("expected '->', found '{tok}'")))
        }
    }
}

fn parse_field_token(cursor: &mut LineCursor) -> PResult<FieldSpec> {
    let (col, tok) = cursor.next("a field ('Q' or 'F<p>')")?;
    field_from_str(tok).map_err(|m| cursor.error_at(col, m))
}

/// `Q` or `F<p>` for a prime p.
pub fn field_from_str(text: &str) -> Result<FieldSpec, String> {
    if text == "Q" {
        return Ok(FieldSpec::RATIONALS);
    }
    if let Some(body) = text.strip_prefix('F') {
        if let Ok(p) = body.parse::<u64>() {
            return FieldSpec::prime(p).map_err(|e| e.to_string());
        }
    }
    Err(format!("bad field '{text}': expected 'Q' or 'F<p>'"))
}

pub fn field_name(field: FieldSpec) -> String {
    match field.characteristic() {
        0 => "Q".to_string(),
        p => format!("F{p}"),
    }
}

struct Header {
    field: FieldSpec,
    space: Arc<GradedSpace>,
}

/// The leading `field` line and `basis` lines, plus the remaining lines.
fn parse_header<'a>(
    file: &'a str,
    lines: &[(usize, &'a str)],
    with_weight: bool,
) -> PResult<(Header, Vec<(usize, &'a str)>)> {
    let (&(line_no, line), rest) = lines.split_first().ok_or_else(|| ParseError {
        file: file.to_string(),
        line: 1,
        column: 1,
        message: "a file must start with a 'field' line".to_string(),
    })?;
    let mut cursor = LineCursor::new(file, line_no, line);
    let (col, tok) = cursor.next("'field'")?;
    if tok != "field" {
        return Err(cursor.error_at(col, "a file must start with a 'field' line"));
    }
    let field = parse_field_token(&mut cursor)?;
    cursor.finish()?;

    let mut basis = Vec::new();
    let mut remaining = Vec::new();
    for &(line_no, line) in rest {
        let mut cursor = LineCursor::new(file, line_no, line);
        let (_, keyword) = cursor.next("a keyword")?;
        if keyword != "basis" || !remaining.is_empty() {
            remaining.push((line_no, line));
            continue;
        }
        let (_, name) = cursor.next("a basis name")?;
        let degree: i64 = cursor.number("degree")?;
        let weight: u32 = if with_weight {
            cursor.number("weight")?
        } else {
            1
        };
        cursor.finish()?;
        basis.push(BasisVector::new(name, degree, weight));
    }
    if basis.is_empty() {
        return Err(ParseError {
            file: file.to_string(),
            line: line_no,
            column: 1,
            message: "no basis lines".to_string(),
        });
    }
    let space = GradedSpace::new(field, basis).map_err(|e| ParseError {
        file: file.to_string(),
        line: line_no,
        column: 1,
        message: e.to_string(),
    })?;
    Ok((Header { field, space }, remaining))
}

fn resolve(space: &GradedSpace, cursor: &LineCursor, col: usize, name: &str) -> PResult<u32> {
    space
        .index_of(name)
        .map_err(|_| cursor.error_at(col, format!("unknown basis vector '{name}'")))
}

/// A structure file into a structure.  The Stasheff relations are not
/// checked here; run `validate` for that.
pub fn parse_algebra(file: &str, text: &str) -> PResult<AInftyStructure> {
    let lines = content_lines(text);
    let (header, rest) = parse_header(file, &lines, true)?;
    let space = &header.space;
    let mut family = ComponentFamily::new(space, 1);
    for (line_no, line) in rest {
        let mut cursor = LineCursor::new(file, line_no, line);
        let (col, keyword) = cursor.next("a keyword")?;
        if keyword == "basis" {
            return Err(cursor.error_at(col, "basis lines must precede component lines"));
        }
        if keyword != "Q" {
            return Err(cursor.error_at(col, format!("expected 'Q' or 'basis', found '{keyword}'")));
        }
        let arity: usize = cursor.number("arity")?;
        let mut inputs = Vec::with_capacity(arity);
        for _ in 0..arity {
            let (col, name) = cursor.next("an input basis name")?;
            inputs.push(resolve(space, &cursor, col, name)?);
        }
        cursor.arrow()?;
        let terms = cursor.term_list(&header.field, 1)?;
        let mut value = Element::zero(space);
        for (coeff, names) in terms {
            let (col, name) = names[0];
            let target = resolve(space, &cursor, col, name)?;
            value = value.add(&Element::basis(space, target).scale(&coeff));
        }
        family.accumulate(TensorWord::new(inputs), &value);
    }
    AInftyStructure::new(family).map_err(|e| ParseError {
        file: file.to_string(),
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

pub fn write_algebra(a: &AInftyStructure) -> String {
    let space = a.space();
    let mut out = format!("field {}\n", field_name(a.field()));
    for v in space.basis() {
        out.push_str(&format!("basis {} {} {}\n", v.name(), v.degree(), v.weight()));
    }
    for arity in a.arities() {
        for (word, value) in a.component(arity).unwrap() {
            if value.is_zero() {
                continue;
            }
            out.push_str(&format!("Q {arity}"));
            for &i in word.factors() {
                out.push_str(&format!(" {}", space.vector(i).name()));
            }
            out.push_str(" ->");
            let mut first = true;
            for (i, c) in value.terms() {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format!(" {} {}", c, space.vector(i).name()));
            }
            out.push('\n');
        }
    }
    out
}

/// A dg algebra file into a dg algebra; runs the builder's associativity,
/// unit, Leibniz, and squared-differential checks.
pub fn parse_dg_algebra(file: &str, text: &str) -> PResult<DgAlgebra> {
    let lines = content_lines(text);
    let (header, rest) = parse_header(file, &lines, false)?;
    // The dg algebra builder has its own name table; replay the basis.
    let mut builder = DgAlgebraBuilder::new(header.field);
    for v in header.space.basis() {
        builder.basis(v.name(), v.degree());
    }
    for (line_no, line) in rest {
        let mut cursor = LineCursor::new(file, line_no, line);
        let (col, keyword) = cursor.next("a keyword")?;
        match keyword {
            "unit" => {
                let first = cursor.next("a unit term")?;
                match cursor.peek() {
                    None => {
                        resolve(&header.space, &cursor, first.0, first.1)?;
                        builder.unit_term(first.1, header.field.one());
                    }
                    Some(_) => {
                        let coeff = parse_scalar(&header.field, first.1).map_err(|_| {
                            cursor.error_at(first.0, format!("bad coefficient '{}'", first.1))
                        })?;
                        let (col, name) = cursor.next("a basis name")?;
                        resolve(&header.space, &cursor, col, name)?;
                        cursor.finish()?;
                        builder.unit_term(name, coeff);
                    }
                }
            }
            "mul" => {
                let (lcol, left) = cursor.next("a basis name")?;
                resolve(&header.space, &cursor, lcol, left)?;
                let (rcol, right) = cursor.next("a basis name")?;
                resolve(&header.space, &cursor, rcol, right)?;
                cursor.arrow()?;
                for (coeff, names) in cursor.term_list(&header.field, 1)? {
                    let (col, name) = names[0];
                    resolve(&header.space, &cursor, col, name)?;
                    builder.mul(left, right, coeff, name);
                }
            }
            "d" => {
                let (col, source) = cursor.next("a basis name")?;
                resolve(&header.space, &cursor, col, source)?;
                cursor.arrow()?;
                for (coeff, names) in cursor.term_list(&header.field, 1)? {
                    let (col, name) = names[0];
                    resolve(&header.space, &cursor, col, name)?;
                    builder.d(source, coeff, name);
                }
            }
            "basis" => {
                return Err(cursor.error_at(col, "basis lines must precede table lines"));
            }
            other => {
                return Err(cursor.error_at(
                    col,
                    format!("expected 'unit', 'mul', or 'd', found '{other}'"),
                ))
            }
        }
    }
    builder.build().map_err(|e| ParseError {
        file: file.to_string(),
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

fn write_combo(out: &mut String, a: &DgAlgebra, combo: &ainfty::DgCombo) {
    let mut first = true;
    for (&i, c) in combo {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!(" {} {}", c, a.name(i)));
    }
}

pub fn write_dg_algebra(a: &DgAlgebra) -> String {
    let mut out = format!("field {}\n", field_name(a.field()));
    for i in 0..a.dim() {
        out.push_str(&format!("basis {} {}\n", a.name(i), a.degree(i)));
    }
    for (&i, c) in a.unit() {
        out.push_str(&format!("unit {} {}\n", c, a.name(i)));
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let product = a.product(i, j);
            if product.is_empty() {
                continue;
            }
            out.push_str(&format!("mul {} {} ->", a.name(i), a.name(j)));
            write_combo(&mut out, a, product);
            out.push('\n');
        }
    }
    for i in 0..a.dim() {
        let d = a.differential(i);
        if d.is_empty() {
            continue;
        }
        out.push_str(&format!("d {} ->", a.name(i)));
        write_combo(&mut out, a, d);
        out.push('\n');
    }
    out
}

/// A coalgebra file into a coalgebra; the builder re-derives
/// coassociativity, co-Leibniz, and (unless `relaxed`) conilpotency.
pub fn parse_coalgebra(file: &str, text: &str) -> PResult<ConilpotentCoalgebra> {
    let lines = content_lines(text);
    let mut relaxed = false;
    let filtered: Vec<(usize, &str)> = lines
        .into_iter()
        .filter(|&(_, l)| {
            if l.trim() == "relaxed" {
                relaxed = true;
                false
            } else {
                true
            }
        })
        .collect();
    let (header, rest) = parse_header(file, &filtered, true)?;
    let mut builder = CoalgebraBuilder::new(header.field);
    for v in header.space.basis() {
        builder.basis(v.name(), v.degree(), v.weight());
    }
    for (line_no, line) in rest {
        let mut cursor = LineCursor::new(file, line_no, line);
        let (col, keyword) = cursor.next("a keyword")?;
        match keyword {
            "coproduct" => {
                let (col, source) = cursor.next("a basis name")?;
                resolve(&header.space, &cursor, col, source)?;
                cursor.arrow()?;
                for (coeff, names) in cursor.term_list(&header.field, 2)? {
                    let (lcol, left) = names[0];
                    resolve(&header.space, &cursor, lcol, left)?;
                    let (rcol, right) = names[1];
                    resolve(&header.space, &cursor, rcol, right)?;
                    builder.coproduct(source, coeff, left, right);
                }
            }
            "d" => {
                let (col, source) = cursor.next("a basis name")?;
                resolve(&header.space, &cursor, col, source)?;
                cursor.arrow()?;
                for (coeff, names) in cursor.term_list(&header.field, 1)? {
                    let (col, name) = names[0];
                    resolve(&header.space, &cursor, col, name)?;
                    builder.d(source, coeff, name);
                }
            }
            "basis" => {
                return Err(cursor.error_at(col, "basis lines must precede table lines"));
            }
            other => {
                return Err(cursor.error_at(
                    col,
                    format!("expected 'coproduct' or 'd', found '{other}'"),
                ))
            }
        }
    }
    let built = if relaxed {
        builder.build_relaxed()
    } else {
        builder.build()
    };
    built.map_err(|e| ParseError {
        file: file.to_string(),
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

pub fn write_coalgebra(c: &ConilpotentCoalgebra) -> String {
    let mut out = format!("field {}\n", field_name(c.field()));
    if !c.is_conilpotent() {
        out.push_str("relaxed\n");
    }
    for i in 0..c.dim() {
        out.push_str(&format!("basis {} {} {}\n", c.name(i), c.degree(i), c.weight(i)));
    }
    for i in 0..c.dim() {
        let terms = c.coproduct_terms(i);
        if terms.is_empty() {
            continue;
        }
        out.push_str(&format!("coproduct {} ->", c.name(i)));
        let mut first = true;
        for (&(l, r), coeff) in terms {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&format!(" {} {} {}", coeff, c.name(l), c.name(r)));
        }
        out.push('\n');
    }
    for i in 0..c.dim() {
        let d = c.diff(i);
        if d.is_empty() {
            continue;
        }
        out.push_str(&format!("d {} ->", c.name(i)));
        let mut first = true;
        for (&t, coeff) in d {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&format!(" {} {}", coeff, c.name(t)));
        }
        out.push('\n');
    }
    out
}

/// A morphism file into a morphism between two already-parsed structures.
pub fn parse_morphism(
    file: &str,
    text: &str,
    source: &AInftyStructure,
    target: &AInftyStructure,
) -> PResult<InftyMorphism> {
    let lines = content_lines(text);
    let mut components = MorphismComponents::new(source.space(), target.space());
    for (line_no, line) in lines {
        let mut cursor = LineCursor::new(file, line_no, line);
        let (col, keyword) = cursor.next("'F'")?;
        if keyword != "F" {
            return Err(cursor.error_at(col, format!("expected 'F', found '{keyword}'")));
        }
        let arity: usize = cursor.number("arity")?;
        if arity == 0 {
            let (c, _) = cursor.tokens[cursor.pos - 1];
            return Err(cursor.error_at(c, "morphism components start at arity 1"));
        }
        let mut inputs = Vec::with_capacity(arity);
        for _ in 0..arity {
            let (col, name) = cursor.next("an input basis name")?;
            inputs.push(resolve(source.space(), &cursor, col, name)?);
        }
        cursor.arrow()?;
        let terms = cursor.term_list(&source.field(), 1)?;
        let mut value = Element::zero(target.space());
        for (coeff, names) in terms {
            let (col, name) = names[0];
            let out = resolve(target.space(), &cursor, col, name)?;
            value = value.add(&Element::basis(target.space(), out).scale(&coeff));
        }
        components.accumulate(TensorWord::new(inputs), &value);
    }
    InftyMorphism::new(source.clone(), target.clone(), components).map_err(|e| ParseError {
        file: file.to_string(),
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// An element in display syntax over a given space: `0`, or terms
/// `[coeff*]name` joined by `+` and `-` tokens.  A leading sign is
/// allowed.
pub fn parse_element(space: &Arc<GradedSpace>, text: &str) -> Result<Element, String> {
    let field = space.field();
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err("empty element".to_string());
    }
    if toks == ["0"] {
        return Ok(Element::zero(space));
    }
    let mut out = Element::zero(space);
    let mut pos = 0;
    let mut sign_required = false;
    loop {
        let mut negate = false;
        match toks.get(pos) {
            Some(&"+") => pos += 1,
            Some(&"-") => {
                negate = true;
                pos += 1;
            }
            Some(_) if !sign_required => {}
            Some(&t) => return Err(format!("expected '+' or '-' before '{t}'")),
            None => return Err("dangling sign".to_string()),
        }
        sign_required = true;
        let term = toks
            .get(pos)
            .ok_or_else(|| "expected a term".to_string())?;
        pos += 1;
        // A full basis name wins over the coeff*name reading, so names
        // that themselves contain '*' stay addressable.
        let (coeff, index) = if let Ok(index) = space.index_of(term) {
            (field.one(), index)
        } else {
            let (c, n) = term
                .split_once('*')
                .ok_or_else(|| format!("unknown basis vector '{term}'"))?;
            let coeff = parse_scalar(&field, c)
                .map_err(|_| format!("bad coefficient '{c}' in '{term}'"))?;
            let index = space
                .index_of(n)
                .map_err(|_| format!("unknown basis vector '{n}'"))?;
            (coeff, index)
        };
        let coeff = if negate { -&coeff } else { coeff };
        out = out.add(&Element::basis(space, index).scale(&coeff));
        if pos == toks.len() {
            return Ok(out);
        }
    }
}
