//! Parametric descriptors for the coalescence families and their
//! construction in canonical vertex order.
//!
//! Text syntax is `name:key=value,...`, for example `kcoal:p1=4,p2=3,k=2`,
//! `windmill:n=2,t=3`, `dandelion:n=19,l=4` or `rose3`. Families that take an
//! arbitrary graph `G` accept `g=TOKEN` where the token is one of `K5`, `P4`,
//! `C6`, `S3` (star with 3 leaves), `N4` (4 isolated vertices), or an explicit
//! graph `n/u-v/u-v/...` such as `4/0-1/1-2`.

use std::fmt;
use std::str::FromStr;

use crate::graph::{join, k_coalescence, make_standard, Graph, GraphError, StandardKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    KCoalComplete,
    Windmill,
    Rose3,
    JoinCoal,
    StarJoinCoal,
    BipartiteStar,
    BipartiteComplete,
    Pineapple,
    Kite,
    Dandelion,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::KCoalComplete,
        Family::Windmill,
        Family::Rose3,
        Family::JoinCoal,
        Family::StarJoinCoal,
        Family::BipartiteStar,
        Family::BipartiteComplete,
        Family::Pineapple,
        Family::Kite,
        Family::Dandelion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::KCoalComplete => "kcoal",
            Family::Windmill => "windmill",
            Family::Rose3 => "rose3",
            Family::JoinCoal => "join",
            Family::StarJoinCoal => "starjoin",
            Family::BipartiteStar => "bistar",
            Family::BipartiteComplete => "bicomplete",
            Family::Pineapple => "pineapple",
            Family::Kite => "kite",
            Family::Dandelion => "dandelion",
        }
    }

    /// Integer parameter names, in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::KCoalComplete => &["p1", "p2", "k"],
            Family::Windmill => &["n", "t"],
            Family::Rose3 => &[],
            Family::JoinCoal => &["p", "k"],
            Family::StarJoinCoal => &["p"],
            Family::BipartiteStar | Family::BipartiteComplete => &["p", "q", "n"],
            Family::Pineapple => &["p", "q"],
            Family::Kite => &["p"],
            Family::Dandelion => &["n", "l"],
        }
    }

    /// Whether the family also takes an arbitrary graph `G`.
    pub fn takes_graph(self) -> bool {
        matches!(self, Family::JoinCoal | Family::StarJoinCoal)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = SpecParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SpecParseError::new(s, "unknown family"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{token}`: {msg}")]
pub struct SpecParseError {
    pub token: String,
    pub msg: String,
}

impl SpecParseError {
    fn new(token: &str, msg: impl Into<String>) -> Self {
        Self { token: token.to_string(), msg: msg.into() }
    }
}

/// One member of a coalescence family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `K_{p1} ∘_k K_{p2}`.
    KCoalComplete { p1: usize, p2: usize, k: usize },
    /// `t` copies of `K_{n+1}` sharing one vertex.
    Windmill { n: usize, t: usize },
    /// Three triangles sharing a vertex; the same graph as `Windmill { n: 2, t: 3 }`.
    Rose3,
    /// `K_p ∘_k (G ∨ K_k)`, identifying along the `K_k` part.
    JoinCoal { p: usize, k: usize, g: Graph },
    /// `K_{1,p-1} ∘_1 (G ∨ K_1)`, identifying the star center with the `K_1`.
    StarJoinCoal { p: usize, g: Graph },
    /// `K_{p,q} ∘_1 K_{1,n}`: a `p`-side vertex identified with the star center.
    BipartiteStar { p: usize, q: usize, n: usize },
    /// `K_{p,q} ∘_1 K_n`: a `p`-side vertex identified with a vertex of `K_n`.
    BipartiteComplete { p: usize, q: usize, n: usize },
    /// `K_p` with `q` pendant vertices at one vertex.
    Pineapple { p: usize, q: usize },
    /// `K_p` with one pendant vertex.
    Kite { p: usize },
    /// Star `K_{1,n-l}` whose center is the end of a path on `l` vertices.
    Dandelion { n: usize, l: usize },
}

fn invalid(msg: String) -> GraphError {
    GraphError::InvalidParameter(msg)
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::KCoalComplete { .. } => Family::KCoalComplete,
            FamilySpec::Windmill { .. } => Family::Windmill,
            FamilySpec::Rose3 => Family::Rose3,
            FamilySpec::JoinCoal { .. } => Family::JoinCoal,
            FamilySpec::StarJoinCoal { .. } => Family::StarJoinCoal,
            FamilySpec::BipartiteStar { .. } => Family::BipartiteStar,
            FamilySpec::BipartiteComplete { .. } => Family::BipartiteComplete,
            FamilySpec::Pineapple { .. } => Family::Pineapple,
            FamilySpec::Kite { .. } => Family::Kite,
            FamilySpec::Dandelion { .. } => Family::Dandelion,
        }
    }

    /// Integer parameters in the order of [`Family::param_names`].
    pub fn params(&self) -> Vec<usize> {
        match *self {
            FamilySpec::KCoalComplete { p1, p2, k } => vec![p1, p2, k],
            FamilySpec::Windmill { n, t } => vec![n, t],
            FamilySpec::Rose3 => vec![],
            FamilySpec::JoinCoal { p, k, .. } => vec![p, k],
            FamilySpec::StarJoinCoal { p, .. } => vec![p],
            FamilySpec::BipartiteStar { p, q, n } | FamilySpec::BipartiteComplete { p, q, n } => {
                vec![p, q, n]
            }
            FamilySpec::Pineapple { p, q } => vec![p, q],
            FamilySpec::Kite { p } => vec![p],
            FamilySpec::Dandelion { n, l } => vec![n, l],
        }
    }

    pub fn graph_param(&self) -> Option<&Graph> {
        match self {
            FamilySpec::JoinCoal { g, .. } | FamilySpec::StarJoinCoal { g, .. } => Some(g),
            _ => None,
        }
    }

    /// Builds a spec from named integer parameters (and `G` where required).
    /// Does not validate; see [`FamilySpec::validate`].
    pub fn from_params(family: Family, params: &[usize], g: Option<Graph>) -> Result<Self, SpecParseError> {
        let names = family.param_names();
        if params.len() != names.len() {
            return Err(SpecParseError::new(
                family.name(),
                format!("expected parameters {names:?}, got {} value(s)", params.len()),
            ));
        }
        let need_g = || {
            g.clone()
                .ok_or_else(|| SpecParseError::new(family.name(), "missing graph parameter `g`"))
        };
        let p = params;
        Ok(match family {
            Family::KCoalComplete => FamilySpec::KCoalComplete { p1: p[0], p2: p[1], k: p[2] },
            Family::Windmill => FamilySpec::Windmill { n: p[0], t: p[1] },
            Family::Rose3 => FamilySpec::Rose3,
            Family::JoinCoal => FamilySpec::JoinCoal { p: p[0], k: p[1], g: need_g()? },
            Family::StarJoinCoal => FamilySpec::StarJoinCoal { p: p[0], g: need_g()? },
            Family::BipartiteStar => FamilySpec::BipartiteStar { p: p[0], q: p[1], n: p[2] },
            Family::BipartiteComplete => FamilySpec::BipartiteComplete { p: p[0], q: p[1], n: p[2] },
            Family::Pineapple => FamilySpec::Pineapple { p: p[0], q: p[1] },
            Family::Kite => FamilySpec::Kite { p: p[0] },
            Family::Dandelion => FamilySpec::Dandelion { n: p[0], l: p[1] },
        })
    }

    /// Checks the family constraints, naming the one that fails.
    pub fn validate(&self) -> Result<(), GraphError> {
        let name = self.family().name();
        if let Some(pos) = self.params().iter().position(|&v| v == 0) {
            return Err(invalid(format!(
                "{name}: parameter {} must be positive",
                self.family().param_names()[pos]
            )));
        }
        match *self {
            FamilySpec::KCoalComplete { p1, p2, k } => {
                if k > p1.min(p2) {
                    return Err(invalid(format!("kcoal: k <= min(p1, p2) violated ({k} > {})", p1.min(p2))));
                }
                if p1 + p2 - k < 2 {
                    return Err(invalid("kcoal: p1 + p2 - k >= 2 violated".into()));
                }
            }
            FamilySpec::Windmill { n, t } => {
                if n < 2 {
                    return Err(invalid(format!("windmill: n > 1 required, got n = {n}")));
                }
                if t < 2 {
                    return Err(invalid(format!("windmill: t >= 2 required, got t = {t}")));
                }
            }
            FamilySpec::Rose3 => {}
            FamilySpec::JoinCoal { p, k, .. } => {
                if k > p {
                    return Err(invalid(format!("join: p >= k violated ({p} < {k})")));
                }
            }
            FamilySpec::StarJoinCoal { p, .. } => {
                if p < 2 {
                    return Err(invalid(format!("starjoin: p >= 2 required, got p = {p}")));
                }
            }
            FamilySpec::BipartiteStar { .. } | FamilySpec::BipartiteComplete { .. } => {}
            FamilySpec::Pineapple { p, .. } => {
                if p < 2 {
                    return Err(invalid(format!("pineapple: p >= 2 required, got p = {p}")));
                }
            }
            FamilySpec::Kite { p } => {
                if p < 2 {
                    return Err(invalid(format!("kite: p >= 2 required, got p = {p}")));
                }
            }
            FamilySpec::Dandelion { n, l } => {
                if l < 2 || l + 1 > n {
                    return Err(invalid(format!("dandelion: 2 <= l <= n - 1 violated (n = {n}, l = {l})")));
                }
            }
        }
        Ok(())
    }

    /// Sizes of the vertex blocks in canonical order. Blocks may be empty.
    ///
    /// | family | blocks |
    /// |---|---|
    /// | kcoal | identified `k`, `K_{p1}` rest, `K_{p2}` rest |
    /// | windmill | center, then one block of `n` per blade |
    /// | join | identified `k`, `K_p` rest, `G` |
    /// | starjoin | center, leaves, `G` |
    /// | bistar / bicomplete | identified, rest of `p` side, `q` side, rest of second operand |
    /// | pineapple / kite | identified, `K_p` rest, pendants |
    /// | dandelion | path from the center (center first), star leaves |
    pub fn block_sizes(&self) -> Vec<usize> {
        match *self {
            FamilySpec::KCoalComplete { p1, p2, k } => vec![k, p1 - k, p2 - k],
            FamilySpec::Windmill { n, t } => std::iter::once(1).chain(std::iter::repeat_n(n, t)).collect(),
            FamilySpec::Rose3 => vec![1, 2, 2, 2],
            FamilySpec::JoinCoal { p, k, ref g } => vec![k, p - k, g.order()],
            FamilySpec::StarJoinCoal { p, ref g } => vec![1, p - 1, g.order()],
            FamilySpec::BipartiteStar { p, q, n } => vec![1, p - 1, q, n],
            FamilySpec::BipartiteComplete { p, q, n } => vec![1, p - 1, q, n - 1],
            FamilySpec::Pineapple { p, q } => vec![1, p - 1, q],
            FamilySpec::Kite { p } => vec![1, p - 1, 1],
            FamilySpec::Dandelion { n, l } => vec![l, n - l],
        }
    }

    /// Total vertex count.
    pub fn order(&self) -> usize {
        self.block_sizes().iter().sum()
    }

    /// Key for ordering reports: family, then integer parameters, then `G`.
    pub fn sort_key(&self) -> (Family, Vec<usize>, String) {
        (
            self.family(),
            self.params(),
            self.graph_param().map(graph_token).unwrap_or_default(),
        )
    }
}

/// Canonical `n/u-v/...` token for a graph parameter.
pub fn graph_token(g: &Graph) -> String {
    let mut s = g.order().to_string();
    for (u, v) in g.edges() {
        s.push_str(&format!("/{u}-{v}"));
    }
    s
}

/// Parses a graph token: `K<n>`, `P<n>`, `C<n>`, `S<leaves>`, `N<n>` or `n/u-v/...`.
pub fn parse_graph_token(tok: &str) -> Result<Graph, SpecParseError> {
    let err = |msg: &str| SpecParseError::new(tok, msg);
    let num = |s: &str| s.parse::<usize>().map_err(|_| err("expected a non-negative integer"));
    let mut chars = tok.chars();
    let kind = match chars.next() {
        Some('K') => Some(StandardKind::Complete),
        Some('P') => Some(StandardKind::Path),
        Some('C') => Some(StandardKind::Cycle),
        Some('S') => Some(StandardKind::Star),
        Some('N') => Some(StandardKind::Edgeless),
        Some(c) if c.is_ascii_digit() => None,
        _ => return Err(err("expected K<n>, P<n>, C<n>, S<n>, N<n> or n/u-v/...")),
    };
    if let Some(kind) = kind {
        let n = num(chars.as_str())?;
        return make_standard(kind, &[n]).map_err(|e| err(&e.to_string()));
    }
    let mut parts = tok.split('/');
    let n = num(parts.next().unwrap_or(""))?;
    let mut edges = Vec::new();
    for part in parts {
        let (u, v) = part.split_once('-').ok_or_else(|| err("edges are written u-v"))?;
        edges.push((num(u)?, num(v)?));
    }
    Graph::new(n, edges).map_err(|e| err(&e.to_string()))
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = self.family();
        f.write_str(family.name())?;
        let mut fields: Vec<String> = family
            .param_names()
            .iter()
            .zip(self.params())
            .map(|(name, v)| format!("{name}={v}"))
            .collect();
        if let Some(g) = self.graph_param() {
            fields.push(format!("g={}", graph_token(g)));
        }
        if !fields.is_empty() {
            write!(f, ":{}", fields.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = SpecParseError;

    /// Parses and validates.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let family: Family = name.parse()?;
        let names = family.param_names();
        let mut values: Vec<Option<usize>> = vec![None; names.len()];
        let mut g = None;
        for field in rest.split(',').filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| SpecParseError::new(field, "expected key=value"))?;
            if key == "g" && family.takes_graph() {
                g = Some(parse_graph_token(value)?);
                continue;
            }
            let slot = names
                .iter()
                .position(|n| *n == key)
                .ok_or_else(|| SpecParseError::new(key, format!("unknown parameter for {family}")))?;
            if values[slot].is_some() {
                return Err(SpecParseError::new(key, "parameter given twice"));
            }
            let v = value
                .parse()
                .map_err(|_| SpecParseError::new(value, "expected a non-negative integer"))?;
            values[slot] = Some(v);
        }
        let params = values
            .iter()
            .zip(names)
            .map(|(v, n)| v.ok_or_else(|| SpecParseError::new(s, format!("missing parameter `{n}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = FamilySpec::from_params(family, &params, g)?;
        spec.validate().map_err(|e| SpecParseError::new(s, e.to_string()))?;
        Ok(spec)
    }
}

fn complete(n: usize) -> Result<Graph, GraphError> {
    make_standard(StandardKind::Complete, &[n])
}

/// Builds the graph described by `spec` in canonical block order
/// (see [`FamilySpec::block_sizes`]), labelling vertices by block.
pub fn build_family(spec: &FamilySpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let mut g = match *spec {
        FamilySpec::KCoalComplete { p1, p2, k } => {
            let ids: Vec<usize> = (0..k).collect();
            k_coalescence(&complete(p1)?, &ids, &complete(p2)?, &ids)?
        }
        FamilySpec::Windmill { n, t } => windmill(n, t)?,
        FamilySpec::Rose3 => windmill(2, 3)?,
        FamilySpec::JoinCoal { p, k, ref g } => {
            let ids: Vec<usize> = (0..k).collect();
            k_coalescence(&complete(p)?, &ids, &join(&complete(k)?, g), &ids)?
        }
        FamilySpec::StarJoinCoal { p, ref g } => {
            let star = make_standard(StandardKind::Star, &[p - 1])?;
            k_coalescence(&star, &[0], &join(&complete(1)?, g), &[0])?
        }
        FamilySpec::BipartiteStar { p, q, n } => {
            let kpq = make_standard(StandardKind::CompleteBipartite, &[p, q])?;
            k_coalescence(&kpq, &[0], &make_standard(StandardKind::Star, &[n])?, &[0])?
        }
        FamilySpec::BipartiteComplete { p, q, n } => {
            let kpq = make_standard(StandardKind::CompleteBipartite, &[p, q])?;
            k_coalescence(&kpq, &[0], &complete(n)?, &[0])?
        }
        FamilySpec::Pineapple { p, q } => {
            k_coalescence(&complete(p)?, &[0], &make_standard(StandardKind::Star, &[q])?, &[0])?
        }
        FamilySpec::Kite { p } => k_coalescence(&complete(p)?, &[0], &complete(2)?, &[0])?,
        FamilySpec::Dandelion { n, l } => {
            let path = make_standard(StandardKind::Path, &[l])?;
            k_coalescence(&path, &[0], &make_standard(StandardKind::Star, &[n - l])?, &[0])?
        }
    };
    let names = block_labels(spec.family());
    let mut start = 0;
    for (b, size) in spec.block_sizes().into_iter().enumerate() {
        let name = match spec.family() {
            Family::Windmill | Family::Rose3 if b > 0 => format!("blade-{}", b - 1),
            _ => names[b.min(names.len() - 1)].to_string(),
        };
        (start..start + size).for_each(|v| g.set_label(v, name.clone()));
        start += size;
    }
    Ok(g)
}

fn block_labels(family: Family) -> &'static [&'static str] {
    match family {
        Family::KCoalComplete => &["identified", "left-block", "right-block"],
        Family::Windmill | Family::Rose3 => &["identified"],
        Family::JoinCoal => &["identified", "left-block", "g"],
        Family::StarJoinCoal => &["identified", "leaf", "g"],
        Family::BipartiteStar => &["identified", "p-side", "q-side", "pendant"],
        Family::BipartiteComplete => &["identified", "p-side", "q-side", "right-block"],
        Family::Pineapple | Family::Kite => &["identified", "left-block", "pendant"],
        Family::Dandelion => &["path", "pendant"],
    }
}

fn windmill(n: usize, t: usize) -> Result<Graph, GraphError> {
    let blade = complete(n + 1)?;
    let mut g = blade.clone();
    for _ in 1..t {
        g = k_coalescence(&g, &[0], &blade, &[0])?;
    }
    Ok(g)
}
