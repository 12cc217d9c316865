//! Abstract syntax, parser and printer for the strictly positive language:
//! formulas built from `T` (verum), variables, indexed diamonds `<n>` and
//! conjunction `&`.

use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Edge / modality index. Diamonds are indexed by naturals.
pub type Label = u64;

/// A strictly positive formula.
///
/// Equality is syntactic: `p & q` and `q & p` are distinct values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Var(String),
    Dia(Label, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn dia(label: Label, body: Formula) -> Self {
        Formula::Dia(label, Box::new(body))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    /// Nesting depth of diamonds.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 0,
            Formula::Dia(_, body) => body.modal_depth() + 1,
            Formula::And(l, r) => l.modal_depth().max(r.modal_depth()),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 1,
            Formula::Dia(_, body) => 1 + body.size(),
            Formula::And(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// Conjunction of a finite list: `T` for the empty list, otherwise
/// right-nested with a trailing `T`. The exact shape matters for the
/// tree embedding and is never simplified.
pub fn big_and<I>(fs: I) -> Formula
where
    I: IntoIterator<Item = Formula>,
    I::IntoIter: DoubleEndedIterator,
{
    fs.into_iter()
        .rev()
        .fold(Formula::Top, |acc, f| Formula::and(f, acc))
}

/// An entailment statement `lhs |- rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   formula ::= conj
//   conj    ::= prefixed ('&' prefixed)*        (left-associative)
//   prefixed::= '<' nat '>' prefixed | atom
//   atom    ::= 'T' | ident | '(' formula ')'
//   ident   ::= [a-zA-Z][a-zA-Z0-9_]*           ('T' alone is verum)
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.prefixed()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.prefixed()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefixed(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'<') => {
                self.pos += 1;
                let label = self.nat()?;
                self.expect(b'>')?;
                let body = self.prefixed()?;
                Ok(Formula::dia(label, body))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if name == "T" {
                    Ok(Formula::Top)
                } else {
                    Ok(Formula::var(name))
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<Label, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError { pos: start, msg: "diamond label out of range".into() })
    }
}

/// Parse the textual formula syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Minimal parentheses: `&` is left-associative, `<n>` binds tighter.
        match self {
            Formula::Top => write!(f, "T"),
            Formula::Var(name) => write!(f, "{name}"),
            Formula::Dia(label, body) => {
                if matches!(**body, Formula::And(..)) {
                    write!(f, "<{label}>({body})")
                } else {
                    write!(f, "<{label}> {body}")
                }
            }
            Formula::And(l, r) => {
                // Left nesting matches associativity; right nesting needs parens.
                write!(f, "{l}")?;
                if matches!(**r, Formula::And(..)) {
                    write!(f, " & ({r})")
                } else {
                    write!(f, " & {r}")
                }
            }
        }
    }
}

// JSON form: "T" | {"var": "p"} | {"dia": [n, f]} | {"and": [f, g]}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Formula::Top => ser.serialize_str("T"),
            Formula::Var(name) => {
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("var", name)?;
                m.end()
            }
            Formula::Dia(label, body) => {
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("dia", &(label, body))?;
                m.end()
            }
            Formula::And(l, r) => {
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("and", &(l, r))?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(rename_all = "lowercase")]
        enum Repr {
            Var(String),
            Dia((Label, Box<Formula>)),
            And((Box<Formula>, Box<Formula>)),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Outer {
            Text(String),
            Node(Repr),
        }
        match Outer::deserialize(de)? {
            Outer::Text(s) if s == "T" => Ok(Formula::Top),
            Outer::Text(s) => Err(D::Error::custom(format!("unknown formula constant {s:?}"))),
            Outer::Node(Repr::Var(name)) => Ok(Formula::Var(name)),
            Outer::Node(Repr::Dia((n, f))) => Ok(Formula::Dia(n, f)),
            Outer::Node(Repr::And((l, r))) => Ok(Formula::And(l, r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn parse_respects_precedence() {
        assert_eq!(
            p("<0> p & q"),
            Formula::and(Formula::dia(0, Formula::var("p")), Formula::var("q"))
        );
        assert_eq!(p("T"), Formula::Top);
        assert_eq!(
            p("<1>(p & <0> q)"),
            Formula::dia(1, Formula::and(Formula::var("p"), Formula::dia(0, Formula::var("q"))))
        );
    }

    #[test]
    fn parse_is_left_associative() {
        assert_eq!(
            p("p & q & r"),
            Formula::and(
                Formula::and(Formula::var("p"), Formula::var("q")),
                Formula::var("r")
            )
        );
    }

    #[test]
    fn print_examples() {
        assert_eq!(
            Formula::and(Formula::dia(0, Formula::var("p")), Formula::var("q")).to_string(),
            "<0> p & q"
        );
        assert_eq!(Formula::Top.to_string(), "T");
        assert_eq!(Formula::dia(2, Formula::Top).to_string(), "<2> T");
    }

    #[test]
    fn top_is_not_a_variable() {
        assert_eq!(p("Tx"), Formula::var("Tx"));
        assert_eq!(p("T"), Formula::Top);
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(Formula::Top.modal_depth(), 0);
        assert_eq!(Formula::dia(1, Formula::dia(0, Formula::var("p"))).modal_depth(), 2);
        assert_eq!(
            Formula::and(Formula::dia(0, Formula::var("p")), Formula::var("q")).modal_depth(),
            1
        );
    }

    #[test]
    fn big_and_shape() {
        assert_eq!(big_and([]), Formula::Top);
        assert_eq!(big_and([Formula::var("p")]), Formula::and(Formula::var("p"), Formula::Top));
        assert_eq!(
            big_and([Formula::var("p"), Formula::var("q")]),
            Formula::and(
                Formula::var("p"),
                Formula::and(Formula::var("q"), Formula::Top)
            )
        );
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse("p & & q").unwrap_err();
        assert_eq!(err.pos, 4);
        assert!(parse("<-1> p").is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = p("<1>(p & <0> q) & T");
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Formula>(&json).unwrap(), f);
        assert_eq!(
            serde_json::to_value(&p("<2> x")).unwrap(),
            serde_json::json!({"dia": [2, {"var": "x"}]})
        );
    }
}
