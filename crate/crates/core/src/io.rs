//! JSON file formats for bases, channels, circuits, tomography datasets and
//! reports.
//!
//! Output is canonical: object keys are sorted and floats use the shortest
//! decimal form that round-trips, so identical inputs give identical bytes.
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::basis::{BasisKind, OperatorBasis};
use crate::channels;
use crate::composition::{CircuitSpec, CircuitStep};
use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::representations::{ChannelRepr, ChiMatrix, KrausChannel, ProductBasis, SMatrix};
use crate::tomography::TomographyDataset;

pub const CHANNEL_FORMAT: &str = "qopmat-v1";

fn malformed(msg: impl Into<String>) -> QopError {
    QopError::Malformed(msg.into())
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))
}

pub fn read_json_file(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| QopError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn write_json_file(path: &Path, value: &Value) -> Result<()> {
    fs::write(path, to_canonical_string(value)).map_err(|e| QopError::Io(format!("{}: {e}", path.display())))
}

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(malformed("complex entries must be numbers")),
        },
        _ => Err(malformed(format!("expected a [re, im] pair, got {v}"))),
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|&z| complex_to_json(z)).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<ComplexMatrix> {
    let rows = v.as_array().ok_or_else(|| malformed("matrix must be a list of rows"))?;
    let parsed: Vec<Vec<C64>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| malformed("matrix row must be a list"))?
                .iter()
                .map(complex_from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    ComplexMatrix::from_rows(&parsed).map_err(|e| malformed(e.to_string()))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    get(obj, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| malformed(format!("field {key:?} must be a nonnegative integer")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(format!("{what} must be a JSON object")))
}

/// `{"d", "kind", "elements"}`; elements are always written.
pub fn basis_to_json(b: &OperatorBasis) -> Value {
    json!({
        "d": b.d(),
        "kind": b.kind().as_str(),
        "elements": b.elements().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Per-qudit entry in a channel file; canonical kinds carry no elements.
fn qudit_basis_to_json(b: &OperatorBasis) -> Value {
    match b.kind() {
        BasisKind::Custom => basis_to_json(b),
        kind => json!({ "d": b.d(), "kind": kind.as_str() }),
    }
}

/// Reads a basis entry. Canonical kinds are rebuilt from `d`; custom bases
/// are validated.
pub fn basis_from_json(v: &Value) -> Result<OperatorBasis> {
    let obj = as_object(v, "basis")?;
    let d = get_usize(obj, "d")?;
    let kind: BasisKind = get(obj, "kind")?
        .as_str()
        .ok_or_else(|| malformed("basis kind must be a string"))?
        .parse()
        .map_err(|e: QopError| malformed(e.to_string()))?;
    match kind {
        BasisKind::Custom => {
            let elements = get(obj, "elements")?
                .as_array()
                .ok_or_else(|| malformed("basis elements must be a list"))?
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            OperatorBasis::custom(d, elements)
        }
        kind => OperatorBasis::canonical(kind, d),
    }
}

fn register_to_json(b: &ProductBasis) -> Value {
    json!({ "qudits": b.qudits().iter().map(|q| qudit_basis_to_json(q)).collect::<Vec<_>>() })
}

fn register_from_json(v: &Value, d: usize, n: usize) -> Result<ProductBasis> {
    let obj = as_object(v, "basis")?;
    let qudits = get(obj, "qudits")?.as_array().ok_or_else(|| malformed("basis qudits must be a list"))?;
    if qudits.len() != n {
        return Err(malformed(format!("basis lists {} qudits, channel has n = {n}", qudits.len())));
    }
    let mut parsed: Vec<Arc<OperatorBasis>> = Vec::with_capacity(n);
    for q in qudits {
        let b = basis_from_json(q)?;
        if b.d() != d {
            return Err(malformed(format!("qudit basis has d = {}, channel has d = {d}", b.d())));
        }
        match parsed.iter().find(|p| ***p == b) {
            Some(p) => parsed.push(Arc::clone(p)),
            None => parsed.push(Arc::new(b)),
        }
    }
    ProductBasis::new(parsed)
}

pub fn channel_to_json(repr: &ChannelRepr) -> Value {
    let mut obj = Map::new();
    obj.insert("format".into(), json!(CHANNEL_FORMAT));
    obj.insert("d".into(), json!(repr.d()));
    obj.insert("n".into(), json!(repr.n()));
    obj.insert("repr".into(), json!(repr.kind_name()));
    let data = match repr {
        ChannelRepr::Chi(c) => matrix_to_json(c.data()),
        ChannelRepr::S(s) => matrix_to_json(s.data()),
        ChannelRepr::Kraus(k) => Value::Array(k.operators().iter().map(matrix_to_json).collect()),
    };
    obj.insert("data".into(), data);
    if let Some(b) = repr.basis() {
        obj.insert("basis".into(), register_to_json(b));
    }
    Value::Object(obj)
}

pub fn channel_from_json(v: &Value) -> Result<ChannelRepr> {
    let obj = as_object(v, "channel file")?;
    let format = get(obj, "format")?.as_str().ok_or_else(|| malformed("format must be a string"))?;
    if format != CHANNEL_FORMAT {
        return Err(malformed(format!("unknown format tag {format:?}, expected {CHANNEL_FORMAT:?}")));
    }
    let d = get_usize(obj, "d")?;
    let n = get_usize(obj, "n")?;
    if d < 2 || n == 0 {
        return Err(malformed(format!("channel needs d >= 2 and n >= 1, got d={d}, n={n}")));
    }
    let repr = get(obj, "repr")?.as_str().ok_or_else(|| malformed("repr must be a string"))?;
    let data = get(obj, "data")?;
    let wrap = |e: QopError| match e {
        QopError::DimensionMismatch(m) => malformed(m),
        other => other,
    };
    match repr {
        "chi" | "smatrix" => {
            let basis = register_from_json(get(obj, "basis")?, d, n)?;
            let m = matrix_from_json(data)?;
            if repr == "chi" {
                Ok(ChiMatrix::new(basis, m).map_err(wrap)?.into())
            } else {
                Ok(SMatrix::new(basis, m).map_err(wrap)?.into())
            }
        }
        "kraus" => {
            let ops = data
                .as_array()
                .ok_or_else(|| malformed("Kraus data must be a list of matrices"))?
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ok(KrausChannel::new(d, n, ops).map_err(wrap)?.into())
        }
        other => Err(malformed(format!("unknown repr {other:?}; expected chi, smatrix or kraus"))),
    }
}

pub fn read_channel(path: &Path) -> Result<ChannelRepr> {
    channel_from_json(&read_json_file(path)?)
}

pub fn write_channel(path: &Path, repr: &ChannelRepr) -> Result<()> {
    write_json_file(path, &channel_to_json(repr))
}

/// `{"d", "n", "sigma", "seed", "values"}`, plus a `"basis"` entry when the
/// basis is not Gell-Mann.
pub fn dataset_to_json(ds: &TomographyDataset) -> Value {
    let mut obj = Map::new();
    obj.insert("d".into(), json!(ds.d));
    obj.insert("n".into(), json!(ds.n));
    obj.insert("sigma".into(), json!(ds.sigma));
    obj.insert("seed".into(), json!(ds.seed));
    obj.insert("values".into(), json!(ds.values));
    if ds.basis.kind() != BasisKind::GellMann {
        obj.insert("basis".into(), qudit_basis_to_json(&ds.basis));
    }
    Value::Object(obj)
}

pub fn dataset_from_json(v: &Value) -> Result<TomographyDataset> {
    let obj = as_object(v, "dataset")?;
    let d = get_usize(obj, "d")?;
    let n = get_usize(obj, "n")?;
    let sigma = get(obj, "sigma")?.as_f64().ok_or_else(|| malformed("sigma must be a number"))?;
    let seed = get(obj, "seed")?.as_u64().ok_or_else(|| malformed("seed must be a nonnegative integer"))?;
    let values = get(obj, "values")?
        .as_array()
        .ok_or_else(|| malformed("values must be a list"))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| malformed("values must be numbers")))
        .collect::<Result<Vec<_>>>()?;
    if d < 2 {
        return Err(malformed(format!("dataset needs d >= 2, got {d}")));
    }
    let basis = match obj.get("basis") {
        Some(b) => basis_from_json(b)?,
        None => OperatorBasis::gellmann(d)?,
    };
    TomographyDataset::new(d, n, Arc::new(basis), sigma, seed, values)
}

/// Loaded circuit file: the spec plus every referenced channel, keyed by the
/// reference string used in the file.
#[derive(Debug, Clone)]
pub struct LoadedCircuit {
    pub spec: CircuitSpec,
    pub channels: HashMap<String, ChannelRepr>,
}

/// Parses `{"d", "wires", "steps": [{"channel", "targets"}]}`. A channel
/// reference is either a built-in name (see [`channels::NAMES`]) or a path
/// to a channel file, relative to `base_dir`.
pub fn circuit_from_json(v: &Value, base_dir: &Path) -> Result<LoadedCircuit> {
    let obj = as_object(v, "circuit file")?;
    let d = get_usize(obj, "d")?;
    let wires: Vec<String> = get(obj, "wires")?
        .as_array()
        .ok_or_else(|| malformed("wires must be a list"))?
        .iter()
        .map(|w| w.as_str().map(str::to_owned).ok_or_else(|| malformed("wire names must be strings")))
        .collect::<Result<_>>()?;
    let raw_steps = get(obj, "steps")?.as_array().ok_or_else(|| malformed("steps must be a list"))?;

    let mut channels_by_ref: HashMap<String, ChannelRepr> = HashMap::new();
    let mut steps = Vec::with_capacity(raw_steps.len());
    for step in raw_steps {
        let step = as_object(step, "circuit step")?;
        let reference =
            get(step, "channel")?.as_str().ok_or_else(|| malformed("step channel must be a string"))?.to_owned();
        let target_names = get(step, "targets")?.as_array().ok_or_else(|| malformed("targets must be a list"))?;
        let mut targets = Vec::with_capacity(target_names.len());
        for t in target_names {
            let name = t.as_str().ok_or_else(|| malformed("target names must be strings"))?;
            let idx = wires
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| QopError::InvalidArgument(format!("unknown wire {name:?}")))?;
            targets.push(idx);
        }
        if !channels_by_ref.contains_key(&reference) {
            let repr = if channels::NAMES.contains(&reference.as_str()) {
                channels::by_name(&reference, d)?
            } else {
                read_channel(&base_dir.join(&reference))?
            };
            channels_by_ref.insert(reference.clone(), repr);
        }
        steps.push(CircuitStep { channel: reference, targets });
    }
    Ok(LoadedCircuit { spec: CircuitSpec::new(d, wires, steps)?, channels: channels_by_ref })
}

pub fn read_circuit(path: &Path) -> Result<LoadedCircuit> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    circuit_from_json(&read_json_file(path)?, base)
}
