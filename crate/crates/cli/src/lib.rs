//! Command-line front end. [`run`] takes the argument list and the three
//! standard streams so that tests can drive it in-process.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tamari::order::{default_cap, weak_bruhat_with_cap};
use tamari::{
    classify, count_shapes, hasse_dot, quotient, tamari_order_partitions, BlockPattern, CongruenceClassification,
    Error, ForestShape, LatticeVerdict, LinearizedForest, PartitionSequence, PolygonPartition, Poset,
    StarSequence, Term, ThompsonElement, XWord,
};

/// Environment variable overriding the largest `n` any enumeration accepts.
pub const CAP_VAR: &str = "TAMARI_ENUM_CAP";

const DEFAULT_SHAPE_CAP: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "tamari", version, about = "Thompson monoids, Tamari orders and their combinatorial models")]
struct Cli {
    /// Arity k of words and sequences; JSON inputs carry their own arity.
    #[arg(short = 'k', long = "arity", default_value_t = 2, global = true)]
    arity: usize,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translate an object between the isomorphic models.
    Convert {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Kind,
        /// The object, or `-` to read it from stdin.
        input: String,
    },
    /// Top or bottom normal form of the class.
    Normalize {
        #[arg(long, value_enum, default_value_t = Mode::Top)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Kind::Word)]
        from: Kind,
        input: String,
    },
    /// Whether two objects are equal in P_k.
    Eq {
        #[arg(long, value_enum, default_value_t = Kind::Word)]
        from: Kind,
        a: String,
        b: String,
    },
    /// Monoid product; with --reduce the canonical representative of the product in P_k.
    Mul {
        #[arg(long, alias = "kind", value_enum, default_value_t = Kind::Word)]
        from: Kind,
        #[arg(long)]
        reduce: bool,
        a: String,
        b: String,
    },
    /// Every member of the congruence class.
    Class {
        #[arg(long, value_enum, default_value_t = Kind::Word)]
        from: Kind,
        input: String,
    },
    /// Count tree shapes or congruence classes.
    Count {
        #[arg(long, value_enum)]
        what: CountWhat,
        #[arg(short = 'n')]
        n: Option<usize>,
        /// Block pattern such as `_ _ * _`; classes of S_n' instead of S_n.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Build a poset: weak Bruhat order, its Tamari quotient, or the flip order on partitions.
    Order {
        #[arg(long, value_enum)]
        what: OrderWhat,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        pattern: Option<String>,
        /// Same as `--output dot`.
        #[arg(long)]
        dot: bool,
        /// Also decide whether the poset is a lattice.
        #[arg(long)]
        check_lattice: bool,
    },
    /// Flip a diagonal of a partition upward.
    Flip {
        /// Diagonal as `a,b`.
        #[arg(long)]
        diagonal: String,
        input: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Word,
    Seq,
    Forest,
    Partition,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Top,
    Bottom,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CountWhat {
    Shapes,
    Classes,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrderWhat {
    Bruhat,
    Tamari,
    Partitions,
}

/// Failures after argument parsing; all map to exit code 2.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Input(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// One object in any of the four models.
#[derive(Clone, Debug, PartialEq)]
enum Object {
    Word(XWord, usize),
    Seq(StarSequence),
    Forest(LinearizedForest),
    Partition(PartitionSequence),
}

impl Object {
    fn parse(kind: Kind, text: &str, k: usize) -> CliResult<Object> {
        let text = text.trim();
        let json = || serde_json::from_str::<Value>(text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")));
        Ok(match kind {
            Kind::Word if text.starts_with('[') => {
                let items = json()?;
                let indices = items
                    .as_array()
                    .and_then(|a| a.iter().map(|v| v.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Failure::Input("a word in JSON is an array of indices".into()))?;
                Object::Word(XWord::new(indices), k)
            }
            Kind::Word => Object::Word(text.parse()?, k),
            Kind::Seq if text.starts_with('[') => {
                let items = json()?;
                let terms = items
                    .as_array()
                    .and_then(|a| {
                        a.iter()
                            .map(|v| match v {
                                Value::String(s) if s == "*" => Some(Term::Star),
                                _ => v.as_u64().map(|x| Term::Value(x as usize)),
                            })
                            .collect::<Option<Vec<_>>>()
                    })
                    .ok_or_else(|| Failure::Input("a sequence in JSON is an array of values and \"*\"".into()))?;
                Object::Seq(StarSequence::new(k, terms)?)
            }
            Kind::Seq => Object::Seq(StarSequence::parse(text, k)?),
            Kind::Forest => Object::Forest(LinearizedForest::from_json(&json()?)?),
            Kind::Partition => {
                let v = json()?;
                Object::Partition(if v.is_array() {
                    PartitionSequence::from_json(&v)?
                } else {
                    let p = PolygonPartition::from_json(&v)?;
                    PartitionSequence::new(p.arity(), vec![p])?
                })
            }
        })
    }

    fn kind(&self) -> Kind {
        match self {
            Object::Word(..) => Kind::Word,
            Object::Seq(_) => Kind::Seq,
            Object::Forest(_) => Kind::Forest,
            Object::Partition(_) => Kind::Partition,
        }
    }

    fn arity(&self) -> usize {
        match self {
            Object::Word(_, k) => *k,
            Object::Seq(s) => s.arity(),
            Object::Forest(f) => f.arity(),
            Object::Partition(p) => p.arity(),
        }
    }

    /// The X-word; a partition forgets its linearization, so it yields the
    /// top normal form of its class.
    fn word(&self) -> CliResult<XWord> {
        Ok(match self {
            Object::Word(w, _) => w.clone(),
            Object::Seq(s) => s.inversion_word(),
            Object::Forest(f) => f.word_of(),
            Object::Partition(p) => p.to_shape()?.top_linearization()?.word_of(),
        })
    }

    fn from_word(kind: Kind, w: XWord, k: usize) -> CliResult<Object> {
        Ok(match kind {
            Kind::Word => Object::Word(w, k),
            Kind::Seq => Object::Seq(StarSequence::from_word(&w, k)?),
            Kind::Forest => Object::Forest(LinearizedForest::forest_of_word(&w, k)?),
            Kind::Partition => Object::Partition(PartitionSequence::from_shape(
                &LinearizedForest::forest_of_word(&w, k)?.shape(),
            )?),
        })
    }

    fn shape(&self) -> CliResult<ForestShape> {
        Ok(match self {
            Object::Partition(p) => p.to_shape()?,
            other => LinearizedForest::forest_of_word(&other.word()?, other.arity())?.shape(),
        })
    }

    fn to_json(&self) -> Value {
        match self {
            Object::Word(w, _) => json!(w.indices()),
            Object::Seq(s) => Value::Array(
                s.terms()
                    .iter()
                    .map(|t| match t {
                        Term::Value(v) => json!(v),
                        Term::Star => json!("*"),
                    })
                    .collect(),
            ),
            Object::Forest(f) => f.to_json(),
            Object::Partition(p) => match p.polygons() {
                [] => PolygonPartition::two_gon(p.arity()).map_or(Value::Null, |g| g.to_json()),
                [single] => single.to_json(),
                _ => p.to_json(),
            },
        }
    }

    fn render(&self, format: Format) -> CliResult<String> {
        Ok(match (format, self) {
            (Format::Dot, Object::Forest(f)) => f.to_dot(),
            (Format::Dot, _) => return Err(Failure::Input("DOT output is available for forests and orders only".into())),
            (Format::Json, o) => o.to_json().to_string(),
            (Format::Text, Object::Word(w, _)) => w.to_string(),
            (Format::Text, Object::Seq(s)) => s.to_string(),
            (Format::Text, o) => o.to_json().to_string(),
        })
    }
}

struct Context<'a> {
    k: usize,
    format: Format,
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Context<'_> {
    fn payload(&mut self, arg: &str) -> CliResult<String> {
        if arg != "-" {
            return Ok(arg.to_owned());
        }
        if self.stdin_used {
            return Err(Failure::Input("stdin can be read only once".into()));
        }
        self.stdin_used = true;
        let mut buf = String::new();
        self.stdin
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    }

    fn object(&mut self, kind: Kind, arg: &str) -> CliResult<Object> {
        let text = self.payload(arg)?;
        Object::parse(kind, &text, self.k)
    }

    fn cap(&self, default: usize) -> CliResult<usize> {
        match std::env::var(CAP_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Input(format!("{CAP_VAR} must be a non-negative integer, got {v:?}"))),
            Err(_) => Ok(default),
        }
    }

    fn check_n(&self, n: usize, default: usize, what: &'static str) -> CliResult<()> {
        let cap = self.cap(default)?;
        if n > cap {
            return Err(Error::CapExceeded { what, value: n, cap }.into());
        }
        Ok(())
    }

    fn list<T>(&self, items: &[T], text: impl Fn(&T) -> CliResult<String>, json: impl Fn(&T) -> Value) -> CliResult<String> {
        match self.format {
            Format::Json => Ok(Value::Array(items.iter().map(json).collect()).to_string()),
            Format::Text => Ok(items.iter().map(text).collect::<CliResult<Vec<_>>>()?.join("\n")),
            Format::Dot => Err(Failure::Input("DOT output is available for forests and orders only".into())),
        }
    }

    fn scalar(&self, value: Value) -> CliResult<String> {
        match self.format {
            Format::Dot => Err(Failure::Input("DOT output is available for forests and orders only".into())),
            _ => Ok(value.to_string()),
        }
    }

    fn execute(&mut self, command: Command) -> CliResult<String> {
        match command {
            Command::Convert { from, to, input } => {
                let obj = self.object(from, &input)?;
                if from == to {
                    return obj.render(self.format);
                }
                Object::from_word(to, obj.word()?, obj.arity())?.render(self.format)
            }
            Command::Normalize { mode, from, input } => {
                let obj = self.object(from, &input)?;
                let k = obj.arity();
                if let Object::Partition(_) = obj {
                    return obj.render(self.format);
                }
                let w = obj.word()?;
                let nf = match mode {
                    Mode::Top => w.top_normal_form(k)?,
                    Mode::Bottom => w.bottom_normal_form(k)?,
                };
                Object::from_word(from, nf, k)?.render(self.format)
            }
            Command::Eq { from, a, b } => {
                let (a, b) = (self.object(from, &a)?, self.object(from, &b)?);
                if a.arity() != b.arity() {
                    return Err(Error::ArityMismatch { left: a.arity(), right: b.arity() }.into());
                }
                self.scalar(json!(a.shape()? == b.shape()?))
            }
            Command::Mul { from, reduce, a, b } => {
                let (a, b) = (self.object(from, &a)?, self.object(from, &b)?);
                let product = match (&a, &b) {
                    (Object::Word(u, k), Object::Word(v, l)) if reduce => {
                        let p = ThompsonElement::new(u, *k)?.mul(&ThompsonElement::new(v, *l)?)?;
                        return Object::Word(p.canonical().clone(), *k).render(self.format);
                    }
                    (Object::Word(u, k), Object::Word(v, l)) => {
                        if k != l {
                            return Err(Error::ArityMismatch { left: *k, right: *l }.into());
                        }
                        Object::Word(u.concat(v), *k)
                    }
                    (Object::Seq(r), Object::Seq(s)) => Object::Seq(r.interlace(s)?),
                    (Object::Forest(f), Object::Forest(g)) => Object::Forest(f.stack(g)?),
                    (Object::Partition(p), Object::Partition(q)) => Object::Partition(p.glue(q)?),
                    _ => unreachable!("both operands parsed with the same kind"),
                };
                if reduce && product.kind() != Kind::Partition {
                    let k = product.arity();
                    return Object::from_word(from, product.word()?.top_normal_form(k)?, k)?.render(self.format);
                }
                product.render(self.format)
            }
            Command::Class { from, input } => {
                let obj = self.object(from, &input)?;
                let k = obj.arity();
                let members: Vec<Object> = match from {
                    Kind::Partition => vec![obj],
                    Kind::Forest => obj.shape()?.linearizations().into_iter().map(Object::Forest).collect(),
                    _ => {
                        let mut m = obj
                            .word()?
                            .enumerate_class(k)?
                            .into_iter()
                            .map(|w| Object::from_word(from, w, k))
                            .collect::<CliResult<Vec<_>>>()?;
                        if let Kind::Seq = from {
                            m.sort_by(|a, b| match (a, b) {
                                (Object::Seq(x), Object::Seq(y)) => x.terms().cmp(y.terms()),
                                _ => std::cmp::Ordering::Equal,
                            });
                        }
                        m
                    }
                };
                let format = self.format;
                self.list(&members, |o| o.render(format), Object::to_json)
            }
            Command::Count { what, n, pattern } => {
                let pattern = pattern.map(|p| BlockPattern::parse(&p)).transpose()?;
                let n = match (n, &pattern) {
                    (Some(n), Some(p)) if n != p.n() => {
                        return Err(Failure::Input(format!("-n {n} disagrees with the pattern's {} slots", p.n())))
                    }
                    (Some(n), _) => n,
                    (None, Some(p)) => p.n(),
                    (None, None) => return Err(Failure::Input("give -n or --pattern".into())),
                };
                let count = match what {
                    CountWhat::Shapes => {
                        self.check_n(n, DEFAULT_SHAPE_CAP, "n")?;
                        count_shapes(self.k, n)?
                    }
                    CountWhat::Classes if self.k == 2 => {
                        let pattern = pattern.unwrap_or_else(|| BlockPattern::plain(n));
                        let p = weak_bruhat_with_cap(&pattern, self.cap(default_cap(&pattern))?)?;
                        classify(&p)?.class_count()
                    }
                    CountWhat::Classes => {
                        if pattern.is_some() {
                            return Err(Failure::Input("block patterns need arity 2".into()));
                        }
                        self.check_n(n, DEFAULT_SHAPE_CAP, "n")?;
                        count_classes_by_words(self.k, n)?
                    }
                };
                self.scalar(json!(count))
            }
            Command::Order { what, n, pattern, dot, check_lattice } => {
                let format = if dot { Format::Dot } else { self.format };
                let pattern = pattern.map(|p| BlockPattern::parse(&p)).transpose()?;
                let pattern = match (n, pattern) {
                    (_, Some(p)) => p,
                    (Some(n), None) => BlockPattern::plain(n),
                    (None, None) => return Err(Failure::Input("give -n or --pattern".into())),
                };
                match what {
                    OrderWhat::Bruhat | OrderWhat::Tamari => {
                        if self.k != 2 {
                            return Err(Failure::Input("weak Bruhat orders are built for arity 2".into()));
                        }
                        let p = weak_bruhat_with_cap(&pattern, self.cap(default_cap(&pattern))?)?;
                        let c = classify(&p)?;
                        if let OrderWhat::Bruhat = what {
                            render_poset(&p, Some(&c), check_lattice, format)
                        } else {
                            render_poset(&quotient(&p, &c)?, None, check_lattice, format)
                        }
                    }
                    OrderWhat::Partitions => {
                        let n = pattern.n();
                        self.check_n(n, DEFAULT_SHAPE_CAP, "n")?;
                        let p = tamari_order_partitions(self.k, n, usize::MAX)?;
                        render_poset(&p, None, check_lattice, format)
                    }
                }
            }
            Command::Flip { diagonal, input } => {
                let text = self.payload(&input)?;
                let Object::Partition(seq) = Object::parse(Kind::Partition, &text, self.k)? else {
                    unreachable!("parsed as a partition")
                };
                let [p] = seq.polygons() else {
                    return Err(Failure::Input("flip needs a single partition".into()));
                };
                let d = parse_diagonal(&diagonal)?;
                let q = p.flip_up(d)?;
                let out = PartitionSequence::new(q.arity(), vec![q])?;
                Object::Partition(out).render(self.format)
            }
        }
    }
}

fn parse_diagonal(text: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(Failure::Input(format!("diagonal must be `a,b`, got {text:?}"))),
        },
        _ => Err(Failure::Input(format!("diagonal must be `a,b`, got {text:?}"))),
    }
}

/// Classes of `S_{k,n}` counted as distinct top normal forms over `X_{k,n}`.
fn count_classes_by_words(k: usize, n: usize) -> CliResult<usize> {
    let mut tops = std::collections::BTreeSet::new();
    let mut word = vec![0usize; n];
    loop {
        tops.insert(XWord::new(word.clone()).top_normal_form(k)?);
        // odometer over 0 <= i_j <= (k-1)(n-j)
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(tops.len());
            }
            j -= 1;
            if word[j] < (k - 1) * (n - 1 - j) {
                word[j] += 1;
                break;
            }
            word[j] = 0;
        }
    }
}

fn verdict_text<T: Display>(p: &Poset<T>, v: LatticeVerdict) -> String {
    match v {
        LatticeVerdict::Lattice => "lattice: yes".into(),
        LatticeVerdict::NoJoin(a, b) => format!("lattice: no (no join of {} and {})", p.elements()[a], p.elements()[b]),
        LatticeVerdict::NoMeet(a, b) => format!("lattice: no (no meet of {} and {})", p.elements()[a], p.elements()[b]),
    }
}

fn render_poset<T: Display>(
    p: &Poset<T>,
    classes: Option<&CongruenceClassification>,
    check_lattice: bool,
    format: Format,
) -> CliResult<String> {
    let verdict = check_lattice.then(|| p.is_lattice());
    Ok(match format {
        Format::Dot => hasse_dot(p, classes).trim_end().to_owned(),
        Format::Json => {
            let mut v = p.to_json(classes);
            if let Some(verdict) = verdict {
                v["lattice"] = json!(verdict.is_lattice());
                if let Some((a, b)) = verdict.witness() {
                    v["witness"] = json!([a, b]);
                }
            }
            v.to_string()
        }
        Format::Text => {
            let mut lines = vec![format!("elements: {}", p.len()), format!("covers: {}", p.covers().len())];
            if let Some(c) = classes {
                lines.push(format!("classes: {}", c.class_count()));
            }
            if let Some(v) = verdict {
                lines.push(verdict_text(p, v));
            }
            for (i, e) in p.elements().iter().enumerate() {
                match classes {
                    Some(c) => lines.push(format!("{i}: {e} [class {}]", c.class_of(i))),
                    None => lines.push(format!("{i}: {e}")),
                }
            }
            lines.extend(p.covers().iter().map(|(a, b)| format!("{a} -> {b}")));
            lines.join("\n")
        }
    })
}

/// Runs the CLI; returns the exit code: 0 success, 1 usage error, 2 domain
/// error (bad input, violated invariant, exceeded cap).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    if cli.arity < 2 {
        let _ = writeln!(stderr, "error: {}", Error::InvalidArity(cli.arity));
        return 1;
    }
    let mut ctx = Context {
        k: cli.arity,
        format: cli.output,
        stdin,
        stdin_used: false,
    };
    match ctx.execute(cli.command) {
        Ok(out) => {
            let _ = writeln!(stdout, "{out}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
