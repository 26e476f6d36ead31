//! The if-then rule language.
//!
//! One rule per line:
//!
//! ```text
//! rule := "if" cond ("and" cond)* "then" cond
//! cond := IDENT "is" IDENT
//! ```
//!
//! Keywords are case-insensitive, identifiers are case-sensitive. `#` starts
//! a comment that runs to the end of the line; blank lines are ignored.

use std::fmt;

use crate::variable::LinguisticVariable;

/// 1-based line and column (columns count characters, not bytes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// `variable is term`. Positions are carried for diagnostics and ignored by `==`.
#[derive(Debug, Clone)]
pub struct Condition {
    pub variable: String,
    pub term: String,
    pub variable_pos: Position,
    pub term_pos: Position,
}

impl Condition {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Condition {
            variable: variable.into(),
            term: term.into(),
            variable_pos: Position::default(),
            term_pos: Position::default(),
        }
    }
}

impl PartialEq for Condition {
    fn eq(&self, other: &Self) -> bool {
        self.variable == other.variable && self.term == other.term
    }
}

impl Eq for Condition {}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is {}", self.variable, self.term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub antecedents: Vec<Condition>,
    pub consequent: Condition,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("if ")?;
        for (i, cond) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{cond}")?;
        }
        write!(f, " then {}", self.consequent)
    }
}

/// Parsed rules in source order, with the source kept for diagnostics.
#[derive(Debug, Clone)]
pub struct RuleBase {
    rules: Vec<Rule>,
    source: String,
}

impl RuleBase {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Same rules, reordered by `order` (a permutation of rule indices).
    pub fn permuted(&self, order: &[usize]) -> RuleBase {
        RuleBase {
            rules: order.iter().map(|&i| self.rules[i].clone()).collect(),
            source: self.source.clone(),
        }
    }
}

impl PartialEq for RuleBase {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

/// Canonical text, one rule per line.
impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticKind {
    Syntax,
    DuplicateAntecedent,
    EmptyRuleBase,
    UnknownVariable,
    UnknownTerm { known: Vec<String> },
    SideMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub position: Position,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

/// One or more rule diagnostics, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn iter(&self) -> std::slice::Iter<'_, Diagnostic> {
        self.0.iter()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Keyword {
    If,
    And,
    Then,
    Is,
}

impl Keyword {
    fn lookup(word: &str) -> Option<Keyword> {
        match word.to_ascii_lowercase().as_str() {
            "if" => Some(Keyword::If),
            "and" => Some(Keyword::And),
            "then" => Some(Keyword::Then),
            "is" => Some(Keyword::Is),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Keyword::If => "if",
            Keyword::And => "and",
            Keyword::Then => "then",
            Keyword::Is => "is",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Keyword(Keyword),
    Ident(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: Position,
}

fn describe(tok: Option<&Token>) -> String {
    match tok {
        None => "end of line".into(),
        Some(Token {
            kind: TokenKind::Keyword(k),
            ..
        }) => format!("keyword `{}`", k.as_str()),
        Some(Token {
            kind: TokenKind::Ident(s),
            ..
        }) => format!("identifier `{s}`"),
    }
}

fn syntax(pos: Position, message: String) -> Diagnostic {
    Diagnostic {
        position: pos,
        kind: DiagnosticKind::Syntax,
        message,
    }
}

fn lex_line(line: &str, line_no: usize) -> Result<(Vec<Token>, Position), Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().enumerate().peekable();
    let mut end_col = line.chars().count() + 1;
    while let Some(&(i, c)) = chars.peek() {
        let pos = Position {
            line: line_no,
            column: i + 1,
        };
        if c == '#' {
            end_col = i + 1;
            break;
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_alphabetic() {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let kind = match Keyword::lookup(&word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word),
            };
            tokens.push(Token { kind, pos });
        } else {
            return Err(syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok((
        tokens,
        Position {
            line: line_no,
            column: end_col,
        },
    ))
}

struct LineParser<'a> {
    tokens: &'a [Token],
    next: usize,
    eol: Position,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next)
    }

    fn here(&self) -> Position {
        self.peek().map_or(self.eol, |t| t.pos)
    }

    fn expect_keyword(&mut self, kw: Keyword) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Keyword(k),
                ..
            }) if *k == kw => {
                self.next += 1;
                Ok(())
            }
            other => Err(syntax(
                self.here(),
                format!("expected `{}`, found {}", kw.as_str(), describe(other)),
            )),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Position), Diagnostic> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                pos,
            }) => {
                let out = (s.clone(), *pos);
                self.next += 1;
                Ok(out)
            }
            other => Err(syntax(
                self.here(),
                format!("expected {what}, found {}", describe(other)),
            )),
        }
    }

    fn condition(&mut self) -> Result<Condition, Diagnostic> {
        let (variable, variable_pos) = self.expect_ident("variable name")?;
        self.expect_keyword(Keyword::Is)?;
        let (term, term_pos) = self.expect_ident("term name after `is`")?;
        Ok(Condition {
            variable,
            term,
            variable_pos,
            term_pos,
        })
    }

    fn rule(&mut self) -> Result<Rule, Diagnostic> {
        self.expect_keyword(Keyword::If)?;
        let mut antecedents = vec![self.condition()?];
        loop {
            match self.peek() {
                Some(Token {
                    kind: TokenKind::Keyword(Keyword::And),
                    ..
                }) => {
                    self.next += 1;
                    let cond = self.condition()?;
                    if antecedents.iter().any(|c| c.variable == cond.variable) {
                        return Err(Diagnostic {
                            position: cond.variable_pos,
                            kind: DiagnosticKind::DuplicateAntecedent,
                            message: format!(
                                "variable `{}` appears twice in the same rule",
                                cond.variable
                            ),
                        });
                    }
                    antecedents.push(cond);
                }
                Some(Token {
                    kind: TokenKind::Keyword(Keyword::Then),
                    ..
                }) => {
                    self.next += 1;
                    break;
                }
                other => {
                    return Err(syntax(
                        self.here(),
                        format!("expected `and` or `then`, found {}", describe(other)),
                    ))
                }
            }
        }
        let consequent = self.condition()?;
        if let Some(tok) = self.peek() {
            return Err(syntax(
                tok.pos,
                format!("expected end of line, found {}", describe(Some(tok))),
            ));
        }
        Ok(Rule {
            antecedents,
            consequent,
        })
    }
}

/// Parses rule text. Every malformed line contributes a diagnostic.
pub fn parse_rules(text: &str) -> Result<RuleBase, Diagnostics> {
    let mut rules = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (tokens, eol) = match lex_line(line, line_no) {
            Ok(lexed) => lexed,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let mut parser = LineParser {
            tokens: &tokens,
            next: 0,
            eol,
        };
        match parser.rule() {
            Ok(rule) => rules.push(rule),
            Err(d) => diagnostics.push(d),
        }
    }
    if diagnostics.is_empty() && rules.is_empty() {
        diagnostics.push(Diagnostic {
            position: Position { line: 1, column: 1 },
            kind: DiagnosticKind::EmptyRuleBase,
            message: "no rules found".into(),
        });
    }
    if diagnostics.is_empty() {
        Ok(RuleBase {
            rules,
            source: text.to_owned(),
        })
    } else {
        Err(Diagnostics(diagnostics))
    }
}

/// Resolves every rule reference against the input and output catalogues.
/// Antecedents must name inputs and consequents outputs. All problems are
/// reported, not just the first.
pub fn validate_rules(
    rules: &RuleBase,
    inputs: &[LinguisticVariable],
    outputs: &[LinguisticVariable],
) -> Result<(), Diagnostics> {
    let mut diagnostics = Vec::new();
    for rule in &rules.rules {
        for cond in &rule.antecedents {
            check_condition(cond, inputs, outputs, "input", &mut diagnostics);
        }
        check_condition(
            &rule.consequent,
            outputs,
            inputs,
            "output",
            &mut diagnostics,
        );
    }
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(Diagnostics(diagnostics))
    }
}

fn check_condition(
    cond: &Condition,
    side: &[LinguisticVariable],
    other_side: &[LinguisticVariable],
    side_name: &str,
    out: &mut Vec<Diagnostic>,
) {
    match side.iter().find(|v| v.name() == cond.variable) {
        Some(var) => {
            if var.term(&cond.term).is_none() {
                let known: Vec<String> = var.term_names().map(str::to_owned).collect();
                out.push(Diagnostic {
                    position: cond.term_pos,
                    message: format!(
                        "unknown term `{}` for variable `{}` (known terms: {})",
                        cond.term,
                        cond.variable,
                        known.join(", ")
                    ),
                    kind: DiagnosticKind::UnknownTerm { known },
                });
            }
        }
        None if other_side.iter().any(|v| v.name() == cond.variable) => out.push(Diagnostic {
            position: cond.variable_pos,
            kind: DiagnosticKind::SideMismatch,
            message: format!(
                "variable `{}` is used as an {side_name} but is not declared as one",
                cond.variable
            ),
        }),
        None => out.push(Diagnostic {
            position: cond.variable_pos,
            kind: DiagnosticKind::UnknownVariable,
            message: format!("unknown variable `{}`", cond.variable),
        }),
    }
}
