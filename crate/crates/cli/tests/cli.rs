use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qopmat::io;
use qopmat::{channels, BasisKind, ChannelRepr, ComplexMatrix, KrausChannel, ProductBasis, C64};

fn qopmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qopmat")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = qopmat(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn basis_command() {
    let v = io::parse_json(&stdout_of(&["basis", "--d", "2"])).unwrap();
    assert_eq!(v["kind"], "gellmann");
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);

    let v = io::parse_json(&stdout_of(&["basis", "--d", "3", "--kind", "weyl"])).unwrap();
    let elements = v["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 9);
    for e in elements {
        let m = io::matrix_from_json(e).unwrap().scale_real(3f64.sqrt());
        assert!((&m.dagger() * &m).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }
    assert_eq!(qopmat(&["basis", "--d", "1"]).status.code(), Some(1));
    assert_eq!(qopmat(&["basis", "--d", "2", "--kind", "pauli"]).status.code(), Some(1));
    assert_eq!(qopmat(&["basis"]).status.code(), Some(2));
}

#[test]
fn convert_identity_and_retarget() {
    let dir = tempfile::tempdir().unwrap();
    let chi_path = path(dir.path(), "id_chi.json");
    let reg = ProductBasis::canonical(BasisKind::Transition, 2, 1).unwrap();
    let chi = channels::identity(2, 1).unwrap().to_chi(&reg).unwrap();
    io::write_channel(&chi_path, &chi.clone().into()).unwrap();

    let out = stdout_of(&["convert", "--in", s(&chi_path), "--to", "smatrix"]);
    let ChannelRepr::S(sm) = io::channel_from_json(&io::parse_json(&out).unwrap()).unwrap() else { panic!() };
    assert_eq!(sm.basis().qudit(0).kind(), BasisKind::Transition);
    assert!(sm.data().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);

    let out = stdout_of(&["convert", "--in", s(&chi_path), "--to", "chi", "--basis", "gellmann"]);
    let ChannelRepr::Chi(moved) = io::channel_from_json(&io::parse_json(&out).unwrap()).unwrap() else { panic!() };
    assert_eq!(moved.basis().qudit(0).kind(), BasisKind::GellMann);
    let a = chi.data().eigh().unwrap().eigenvalues;
    let b = moved.data().eigh().unwrap().eigenvalues;
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));

    let basis_file = path(dir.path(), "weyl.json");
    std::fs::write(&basis_file, stdout_of(&["basis", "--d", "2", "--kind", "weyl"])).unwrap();
    let custom = path(dir.path(), "custom.json");
    let mut v = io::parse_json(&std::fs::read_to_string(&basis_file).unwrap()).unwrap();
    v["kind"] = "custom".into();
    std::fs::write(&custom, io::to_canonical_string(&v)).unwrap();
    let out = stdout_of(&["convert", "--in", s(&chi_path), "--to", "smatrix", "--basis", s(&custom)]);
    let ChannelRepr::S(sm) = io::channel_from_json(&io::parse_json(&out).unwrap()).unwrap() else { panic!() };
    assert_eq!(sm.basis().qudit(0).kind(), BasisKind::Custom);
}

#[test]
fn kraus_command_and_non_cp_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let dep = path(dir.path(), "dep.json");
    let reg = ProductBasis::canonical(BasisKind::GellMann, 2, 1).unwrap();
    io::write_channel(&dep, &channels::depolarizing(2, 1).unwrap().to_chi(&reg).unwrap().into()).unwrap();
    let out = stdout_of(&["kraus", "--in", s(&dep)]);
    let ChannelRepr::Kraus(k) = io::channel_from_json(&io::parse_json(&out).unwrap()).unwrap() else { panic!() };
    assert_eq!(k.rank(), 4);

    let bad = path(dir.path(), "bad.json");
    let mut chi = ComplexMatrix::diag_real(&[1.0, -0.1, 0.0, 0.0]);
    chi[(0, 0)] = C64::new(1.0, 0.0);
    io::write_channel(&bad, &qopmat::ChiMatrix::new(reg, chi).unwrap().into()).unwrap();
    let out = qopmat(&["convert", "--in", s(&bad), "--to", "kraus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("-1e-1"));
}

#[test]
fn verify_reports_and_parse_failures() {
    let dir = tempfile::tempdir().unwrap();
    let filter = path(dir.path(), "filter.json");
    io::write_channel(&filter, &KrausChannel::new(2, 1, vec![ComplexMatrix::diag_real(&[1.0, 0.5])]).unwrap().into())
        .unwrap();
    let report = io::parse_json(&stdout_of(&["verify", "--in", s(&filter)])).unwrap();
    assert_eq!(report["is_cp"], true);
    assert_eq!(report["is_trace_nonincreasing"], true);
    assert_eq!(report["is_trace_preserving"], false);

    let wrong_tag = path(dir.path(), "tag.json");
    std::fs::write(&wrong_tag, r#"{"format":"other","d":2,"n":1,"repr":"kraus","data":[]}"#).unwrap();
    let out = qopmat(&["verify", "--in", s(&wrong_tag)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("format"));
    assert_eq!(qopmat(&["verify", "--in", s(&path(dir.path(), "missing.json"))]).status.code(), Some(2));
}

#[test]
fn compose_with_channel_files() {
    let dir = tempfile::tempdir().unwrap();
    let x = path(dir.path(), "x.json");
    io::write_channel(&x, &channels::by_name("X", 2).unwrap()).unwrap();
    let circuit = path(dir.path(), "c.json");
    std::fs::write(
        &circuit,
        r#"{"d":2,"wires":["a","b"],"steps":[{"channel":"x.json","targets":["b"]},{"channel":"CNOT","targets":["b","a"]}]}"#,
    )
    .unwrap();
    let out_path = path(dir.path(), "out.json");
    stdout_of(&["compose", "--circuit", s(&circuit), "--out", s(&out_path)]);
    let repr = io::read_channel(&out_path).unwrap();
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = C64::new(1.0, 0.0);
    let mut expect = ComplexMatrix::zeros(4, 4);
    expect[(3, 3)] = C64::new(1.0, 0.0);
    assert!(repr.apply(&rho).unwrap().max_abs_diff(&expect) < 1e-12);

    std::fs::write(&circuit, r#"{"d":2,"wires":["a"],"steps":[{"channel":"X","targets":["z"]}]}"#).unwrap();
    assert_eq!(qopmat(&["compose", "--circuit", s(&circuit)]).status.code(), Some(1));
}

#[test]
fn tomography_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let ch = path(dir.path(), "h.json");
    io::write_channel(&ch, &channels::by_name("H", 2).unwrap()).unwrap();
    let ds1 = stdout_of(&["tomo", "--channel", s(&ch), "--sigma", "0.01", "--seed", "9"]);
    let ds2 = stdout_of(&["tomo", "--channel", s(&ch), "--sigma", "0.01", "--seed", "9"]);
    assert_eq!(ds1, ds2);
    let ds_path = path(dir.path(), "ds.json");
    std::fs::write(&ds_path, &ds1).unwrap();
    let summary = io::parse_json(&stdout_of(&["tomo", "--reconstruct", s(&ds_path)])).unwrap();
    assert!(summary["report"]["min_chi_eigenvalue"].as_f64().unwrap() < 0.0);
    assert!((summary["predicted_s_error"].as_f64().unwrap() - 0.04).abs() < 1e-15);

    std::fs::write(&ds_path, r#"{"d":2,"n":1,"sigma":0,"seed":0,"values":[1,2,3]}"#).unwrap();
    assert_eq!(qopmat(&["tomo", "--reconstruct", s(&ds_path)]).status.code(), Some(2));
    assert_eq!(qopmat(&["tomo"]).status.code(), Some(2));
}
