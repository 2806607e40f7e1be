//! Sequential composition of channels and lifting onto a register of wires.
//!
//! Circuit steps are listed in time order: the first step acts first, so its
//! S-matrix ends up rightmost in the product.

use std::collections::{HashMap, HashSet};

use crate::error::{QopError, Result};
use crate::representations::{
    check_size, chi_from_kraus, chi_to_s_n, tensor_chi, ChannelRepr, ChiMatrix, KrausChannel, ProductBasis, SMatrix,
};

/// One circuit step: a channel reference applied to the listed wires.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitStep {
    pub channel: String,
    pub targets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub d: usize,
    pub wires: Vec<String>,
    pub steps: Vec<CircuitStep>,
}

impl CircuitSpec {
    pub fn new(d: usize, wires: Vec<String>, steps: Vec<CircuitStep>) -> Result<Self> {
        if d < 2 {
            return Err(QopError::InvalidArgument(format!("qudit dimension must be at least 2, got {d}")));
        }
        if wires.is_empty() {
            return Err(QopError::InvalidArgument("circuit needs at least one wire".into()));
        }
        if wires.iter().collect::<HashSet<_>>().len() != wires.len() {
            return Err(QopError::InvalidArgument("wire names must be distinct".into()));
        }
        for step in &steps {
            check_targets(&step.targets, wires.len())?;
        }
        Ok(Self { d, wires, steps })
    }

    pub fn wire_index(&self, name: &str) -> Result<usize> {
        self.wires
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| QopError::InvalidArgument(format!("unknown wire {name:?}")))
    }
}

fn check_targets(targets: &[usize], n: usize) -> Result<()> {
    if targets.is_empty() {
        return Err(QopError::InvalidArgument("a step needs at least one target".into()));
    }
    if let Some(t) = targets.iter().find(|&&t| t >= n) {
        return Err(QopError::InvalidArgument(format!("target wire {t} outside a {n}-wire register")));
    }
    if targets.iter().collect::<HashSet<_>>().len() != targets.len() {
        return Err(QopError::InvalidArgument(format!("repeated target in {targets:?}")));
    }
    Ok(())
}

/// `S1 S2`: the channel that applies `s2` first and then `s1`.
pub fn compose(s1: &SMatrix, s2: &SMatrix) -> Result<SMatrix> {
    if s1.basis() != s2.basis() {
        return Err(QopError::BasisMismatch(format!(
            "cannot compose S-matrices over {} and {}",
            s1.basis().describe(),
            s2.basis().describe()
        )));
    }
    SMatrix::new(s1.basis().clone(), s1.data() * s2.data())
}

/// Extended S-matrix over `register` for a channel acting on `targets`.
///
/// `targets[k]` is the wire the channel's `k`-th qudit acts on. The chi-matrix
/// `chi (x) chi_identity` is built with the targets first, its qudit factors
/// are permuted into wire order and the result is converted to S.
pub fn lift(repr: &ChannelRepr, targets: &[usize], register: &ProductBasis) -> Result<SMatrix> {
    let n = register.n();
    let d = register.d();
    check_targets(targets, n)?;
    if repr.n() != targets.len() || repr.d() != d {
        return Err(QopError::DimensionMismatch(format!(
            "channel on {} qudits of d = {} applied to {} wires of d = {d}",
            repr.n(),
            repr.d(),
            targets.len()
        )));
    }
    check_size(register.size())?;

    let target_basis = ProductBasis::new(targets.iter().map(|&t| register.qudit(t).clone()).collect())?;
    let chi = repr.to_chi(&target_basis)?;
    let rest: Vec<usize> = (0..n).filter(|w| !targets.contains(w)).collect();
    if rest.is_empty() && targets.iter().enumerate().all(|(k, &t)| k == t) {
        return chi_to_s_n(&chi);
    }
    let combined = if rest.is_empty() {
        chi
    } else {
        let rest_basis = ProductBasis::new(rest.iter().map(|&w| register.qudit(w).clone()).collect())?;
        let idle = chi_from_kraus(&KrausChannel::identity(d, rest.len())?, &rest_basis)?;
        tensor_chi(&chi, &idle)?
    };

    let order: Vec<usize> = targets.iter().chain(&rest).copied().collect();
    let perm: Vec<usize> = (0..n).map(|w| order.iter().position(|&o| o == w).expect("every wire placed")).collect();
    let data = combined.data().permute_factors(&vec![d * d; n], &perm)?;
    chi_to_s_n(&ChiMatrix::new(register.clone(), data)?)
}

/// Product of the lifted S-matrices of every step, later steps on the left.
/// An empty circuit gives the identity.
pub fn run_circuit(
    circuit: &CircuitSpec,
    channels: &HashMap<String, ChannelRepr>,
    register: &ProductBasis,
) -> Result<SMatrix> {
    if register.n() != circuit.wires.len() || register.d() != circuit.d {
        return Err(QopError::DimensionMismatch(format!(
            "register basis {} does not fit a {}-wire d = {} circuit",
            register.describe(),
            circuit.wires.len(),
            circuit.d
        )));
    }
    check_size(register.size())?;
    let mut total = SMatrix::identity(register.clone());
    for step in &circuit.steps {
        let repr = channels
            .get(&step.channel)
            .ok_or_else(|| QopError::InvalidArgument(format!("no channel named {:?}", step.channel)))?;
        let lifted = lift(repr, &step.targets, register)?;
        total = compose(&lifted, &total)?;
    }
    Ok(total)
}
