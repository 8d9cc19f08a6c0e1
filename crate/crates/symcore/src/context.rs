//! Variable bookkeeping shared by every expression.
//!
//! A context always starts with the independent variable `x`, followed by the
//! field variables `u^1..u^n` and the formal parameters. In covering mode the
//! jet indeterminates are appended after these base variables, so a rational
//! function built over the base context is a valid coefficient in the
//! covering context without any re-indexing.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Result, SymError};

/// Index of a variable inside its [`VariableContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// What a jet indeterminate stands for. `order` counts x-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JetRole {
    /// `u^i_x`, `u^i_xx` (order 1, 2).
    Field { field: usize, order: u8 },
    /// `u^i_t`.
    FieldTime { field: usize },
    /// Cotangent covering variables `p_i`, `p_{i,x}`, `p_{i,xx}`.
    Covector { index: usize, order: u8 },
    /// `p_{i,t}`.
    CovectorTime { index: usize },
    /// Tangent covering variables `q^i`, `q^i_x`, `q^i_xx`.
    Vector { index: usize, order: u8 },
    /// `q^i_t`.
    VectorTime { index: usize },
    /// The nonlocal variable `r`.
    Nonlocal,
    /// `r_x`.
    NonlocalX,
    /// `r_t`.
    NonlocalT,
}

impl JetRole {
    /// Highest x-order stored for `u`, `p` and `q` jets.
    pub const MAX_ORDER: u8 = 2;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    Independent,
    Field(usize),
    Parameter,
    Jet(JetRole),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub role: VarRole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableContext {
    vars: Vec<VarInfo>,
    index: HashMap<String, VarId>,
    n_fields: usize,
    base_len: usize,
    covering: bool,
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableContext {
    /// Base context: `x`, then `fields`, then `parameters`.
    pub fn new<S: AsRef<str>, P: AsRef<str>>(fields: &[S], parameters: &[P]) -> Result<Self> {
        if fields.is_empty() {
            return Err(SymError::NoFields);
        }
        let mut ctx = VariableContext {
            vars: Vec::new(),
            index: HashMap::new(),
            n_fields: fields.len(),
            base_len: 0,
            covering: false,
        };
        ctx.push("x", VarRole::Independent)?;
        for (i, f) in fields.iter().enumerate() {
            ctx.push(f.as_ref(), VarRole::Field(i))?;
        }
        for p in parameters {
            ctx.push(p.as_ref(), VarRole::Parameter)?;
        }
        ctx.base_len = ctx.vars.len();
        Ok(ctx)
    }

    /// Context with the default field names `u`, `v`, `w` (n <= 3) or
    /// `u1..un` otherwise.
    pub fn with_default_fields<P: AsRef<str>>(n: usize, parameters: &[P]) -> Result<Self> {
        let names: Vec<String> = if (1..=3).contains(&n) {
            ["u", "v", "w"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("u{i}")).collect()
        };
        Self::new(&names, parameters)
    }

    fn push(&mut self, name: &str, role: VarRole) -> Result<VarId> {
        if !valid_identifier(name) {
            return Err(SymError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(SymError::DuplicateName(name.to_string()));
        }
        let id = VarId(self.vars.len());
        self.vars.push(VarInfo {
            name: name.to_string(),
            role,
        });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Extends a base context with the jet indeterminates of the tangent and
    /// cotangent coverings. Names: `u_x`, `u_xx`, `u_t` per field; `p1`,
    /// `p1_x`, `p1_xx`, `p1_t`; `q1`, ...; and `r`, `r_x`, `r_t`.
    pub fn covering_mode(&self) -> Result<Self> {
        if self.covering {
            return Ok(self.clone());
        }
        let mut ctx = self.clone();
        ctx.covering = true;
        let fields: Vec<String> = (0..self.n_fields)
            .map(|i| self.vars[self.field(i).0].name.clone())
            .collect();
        for (i, f) in fields.iter().enumerate() {
            ctx.push(
                &format!("{f}_x"),
                VarRole::Jet(JetRole::Field { field: i, order: 1 }),
            )?;
            ctx.push(
                &format!("{f}_xx"),
                VarRole::Jet(JetRole::Field { field: i, order: 2 }),
            )?;
            ctx.push(
                &format!("{f}_t"),
                VarRole::Jet(JetRole::FieldTime { field: i }),
            )?;
        }
        for i in 0..self.n_fields {
            let k = i + 1;
            ctx.push(
                &format!("p{k}"),
                VarRole::Jet(JetRole::Covector { index: i, order: 0 }),
            )?;
            ctx.push(
                &format!("p{k}_x"),
                VarRole::Jet(JetRole::Covector { index: i, order: 1 }),
            )?;
            ctx.push(
                &format!("p{k}_xx"),
                VarRole::Jet(JetRole::Covector { index: i, order: 2 }),
            )?;
            ctx.push(
                &format!("p{k}_t"),
                VarRole::Jet(JetRole::CovectorTime { index: i }),
            )?;
        }
        for i in 0..self.n_fields {
            let k = i + 1;
            ctx.push(
                &format!("q{k}"),
                VarRole::Jet(JetRole::Vector { index: i, order: 0 }),
            )?;
            ctx.push(
                &format!("q{k}_x"),
                VarRole::Jet(JetRole::Vector { index: i, order: 1 }),
            )?;
            ctx.push(
                &format!("q{k}_xx"),
                VarRole::Jet(JetRole::Vector { index: i, order: 2 }),
            )?;
            ctx.push(
                &format!("q{k}_t"),
                VarRole::Jet(JetRole::VectorTime { index: i }),
            )?;
        }
        ctx.push("r", VarRole::Jet(JetRole::Nonlocal))?;
        ctx.push("r_x", VarRole::Jet(JetRole::NonlocalX))?;
        ctx.push("r_t", VarRole::Jet(JetRole::NonlocalT))?;
        Ok(ctx)
    }

    pub fn is_covering_mode(&self) -> bool {
        self.covering
    }

    /// Total number of variables, including jets.
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of base (non-jet) variables.
    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn n_fields(&self) -> usize {
        self.n_fields
    }

    pub fn x(&self) -> VarId {
        VarId(0)
    }

    pub fn field(&self, i: usize) -> VarId {
        assert!(i < self.n_fields, "field index {i} out of range");
        VarId(1 + i)
    }

    pub fn fields(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.n_fields).map(move |i| self.field(i))
    }

    pub fn parameters(&self) -> impl Iterator<Item = VarId> + '_ {
        (1 + self.n_fields..self.base_len).map(VarId)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.0].name
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn role(&self, id: VarId) -> VarRole {
        self.vars[id.0].role
    }

    pub fn is_jet(&self, id: VarId) -> bool {
        matches!(self.vars[id.0].role, VarRole::Jet(_))
    }

    /// Finds the jet variable with the given role (covering mode only).
    pub fn jet(&self, role: JetRole) -> Option<VarId> {
        self.vars[self.base_len..]
            .iter()
            .position(|v| v.role == VarRole::Jet(role))
            .map(|p| VarId(self.base_len + p))
    }

    /// Convenience lookup panicking when the context is not in covering mode.
    pub fn jet_var(&self, role: JetRole) -> VarId {
        self.jet(role)
            .unwrap_or_else(|| panic!("jet {role:?} requires a covering-mode context"))
    }
}

impl fmt::Display for VariableContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names().join(", "))
    }
}
