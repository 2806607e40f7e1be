//! Worked examples with hand-derived expected values.

use std::collections::HashMap;
use std::sync::Arc;

use qopmat::composition::CircuitStep;
use qopmat::representations::{chi_to_s_n, convert_factorized, convert_n, s_to_chi_n, tensor_chi};
use qopmat::tomography::default_basis;
use qopmat::{
    build_kit, build_two_qudit_kit, channels, chi_from_kraus, chi_to_s, chi_to_s_2, compose, kraus_from_chi, lift,
    random, reconstruct, run_circuit, s_to_chi, s_to_chi_2, simulate_dataset, BasisKind, ChannelRepr, ChiMatrix,
    CircuitSpec, ComplexMatrix, KrausChannel, OperatorBasis, ProductBasis, SMatrix, C64,
};

fn gm(d: usize, n: usize) -> ProductBasis {
    ProductBasis::canonical(BasisKind::GellMann, d, n).unwrap()
}

fn single_entry(size: usize, value: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(size, size);
    m[(0, 0)] = C64::new(value, 0.0);
    m
}

#[test]
fn identity_chi_and_s_in_gellmann() {
    for d in [2, 3, 4] {
        let chi = ChiMatrix::new(gm(d, 1), single_entry(d * d, d as f64)).unwrap();
        let kit = build_kit(gm(d, 1).qudit(0)).unwrap();
        let s = chi_to_s(&chi, &kit).unwrap();
        assert!(s.data().max_abs_diff(&ComplexMatrix::identity(d * d)) < 1e-13);
        let back = s_to_chi(&SMatrix::identity(gm(d, 1)), &kit).unwrap();
        assert!(back.data().max_abs_diff(chi.data()) < 1e-13);
    }
}

#[test]
fn depolarizing_chi_is_scaled_identity_in_transition_basis() {
    let d = 3;
    let reg = ProductBasis::canonical(BasisKind::Transition, d, 1).unwrap();
    let chi = channels::depolarizing(d, 1).unwrap().to_chi(&reg).unwrap();
    assert!(chi.data().max_abs_diff(&ComplexMatrix::identity(9).scale_real(1.0 / 3.0)) < 1e-14);
    let s = chi_to_s_n(&chi.change_basis(&gm(d, 1)).unwrap()).unwrap();
    assert!(s.data().max_abs_diff(&single_entry(9, 1.0)) < 1e-13);
}

#[test]
fn superop_and_choi_examples() {
    let id = channels::identity(2, 1).unwrap();
    assert_eq!(id.superop_matrix().unwrap(), ComplexMatrix::identity(4));
    let choi = id.choi_operator().unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let expect = if [0, 3].contains(&r) && [0, 3].contains(&c) { 1.0 } else { 0.0 };
            assert_eq!(choi[(r, c)], C64::new(expect, 0.0));
        }
    }
    let dep = channels::depolarizing(2, 1).unwrap().choi_operator().unwrap();
    assert!(dep.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.5)) < 1e-15);

    let mut rng = random::rng(11);
    let k = random::kraus_channel(&mut rng, 3, 1, 4);
    let repr: ChannelRepr = k.clone().into();
    let l = repr.superop_matrix().unwrap();
    for _ in 0..20 {
        let rho = random::density(&mut rng, 3);
        let out = l.matvec(rho.as_slice()).unwrap();
        let direct = k.apply(&rho).unwrap();
        let out = ComplexMatrix::new(3, 3, out).unwrap();
        assert!(out.max_abs_diff(&direct) < 1e-12);
    }
    let choi_eigs = repr.choi_operator().unwrap().eigh().unwrap().eigenvalues;
    for kind in [BasisKind::Transition, BasisKind::Weyl, BasisKind::GellMann] {
        let chi = repr.to_chi(&ProductBasis::canonical(kind, 3, 1).unwrap()).unwrap();
        let chi_eigs = chi.data().eigh().unwrap().eigenvalues;
        for (a, b) in choi_eigs.iter().zip(&chi_eigs) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn kraus_extraction_examples() {
    let chi = ChannelRepr::from(KrausChannel::identity(2, 1).unwrap()).to_chi(&gm(2, 1)).unwrap();
    let k = kraus_from_chi(&chi).unwrap();
    assert_eq!(k.rank(), 1);
    let op = &k.operators()[0];
    let phase = op[(0, 0)];
    assert!((phase.norm() - 1.0).abs() < 1e-12);
    assert!(op.max_abs_diff(&ComplexMatrix::identity(2).scale(phase)) < 1e-12);

    let dep = channels::depolarizing(2, 1).unwrap().to_chi(&gm(2, 1)).unwrap();
    let k = kraus_from_chi(&dep).unwrap();
    assert_eq!(k.rank(), 4);
    for op in k.operators() {
        assert!((&op.dagger() * op).max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.25)) < 1e-12);
    }
}

#[test]
fn two_qudit_kit_examples() {
    let e = Arc::new(OperatorBasis::gellmann(2).unwrap());
    let kits = build_two_qudit_kit(&e, &e).unwrap();
    for (q, s) in kits.first.q().iter().zip(kits.s()) {
        assert_eq!(q, s);
    }
    let m = kits.first.m_matrix().kron(&kits.second.m_matrix());
    assert!(m.max_abs_diff(&m.dagger()) < 1e-12);
    assert!((&m * &m).max_abs_diff(&ComplexMatrix::identity(m.rows())) < 1e-12);

    let f = Arc::new(OperatorBasis::weyl(2).unwrap());
    let mixed = build_two_qudit_kit(&e, &f).unwrap();
    let pi = OperatorBasis::transition(2).unwrap();
    for (lambda, alpha, beta) in [(1, 2, 3), (2, 0, 1), (3, 3, 3)] {
        let lhs = mixed.s()[lambda][(alpha, beta)];
        let ident = ComplexMatrix::identity(2);
        let op = ident.kron(pi.element(lambda));
        let fa: Vec<C64> = f.element(alpha).as_slice().to_vec();
        let fb: Vec<C64> = f.element(beta).as_slice().to_vec();
        let image = op.matvec(&fb).unwrap();
        let rhs: C64 = fa.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}

#[test]
fn two_qudit_identity_and_cnot() {
    let reg = gm(2, 2);
    let kits = build_two_qudit_kit(reg.qudit(0), reg.qudit(1)).unwrap();
    let chi = s_to_chi_2(&SMatrix::identity(reg.clone()), &kits).unwrap();
    assert!(chi.data().max_abs_diff(&single_entry(16, 4.0)) < 1e-13);

    let cnot = channels::by_name("CNOT", 2).unwrap().to_chi(&reg).unwrap();
    let s = chi_to_s_2(&cnot, &kits).unwrap();
    let back = s_to_chi_2(&s, &kits).unwrap();
    assert!(back.data().max_abs_diff(cnot.data()) < 1e-12);
    let e = cnot.data().eigh().unwrap().eigenvalues;
    assert!((e[0] - 4.0).abs() < 1e-12);
    assert!(e[1..].iter().all(|l| l.abs() < 1e-12));
    assert!((cnot.data().trace().unwrap().re - 4.0).abs() < 1e-12);
}

#[test]
fn product_channel_chi_is_kron_of_factors() {
    let mut rng = random::rng(21);
    let a = random::kraus_channel(&mut rng, 2, 1, 2);
    let b = random::kraus_channel(&mut rng, 2, 1, 3);
    let mut ops = Vec::new();
    for ka in a.operators() {
        for kb in b.operators() {
            ops.push(ka.kron(kb));
        }
    }
    let ab = KrausChannel::new(2, 2, ops).unwrap();
    let reg = ProductBasis::new(vec![
        Arc::new(OperatorBasis::gellmann(2).unwrap()),
        Arc::new(OperatorBasis::weyl(2).unwrap()),
    ])
    .unwrap();
    let chi_a = chi_from_kraus(&a, &ProductBasis::single(reg.qudit(0).clone())).unwrap();
    let chi_b = chi_from_kraus(&b, &ProductBasis::single(reg.qudit(1).clone())).unwrap();
    let joint = chi_from_kraus(&ab, &reg).unwrap();
    let tensor = tensor_chi(&chi_a, &chi_b).unwrap();
    assert!(joint.data().max_abs_diff(tensor.data()) < 1e-12);
    let choi = ChannelRepr::from(ab).choi_operator().unwrap();
    let b_mat = reg.vec_matrix();
    let via_choi = &(&b_mat.dagger() * &choi) * &b_mat;
    assert!(via_choi.max_abs_diff(joint.data()) < 1e-12);
}

#[test]
fn n_qudit_dispatch_and_three_qubits() {
    let reg = gm(2, 2);
    let mut rng = random::rng(31);
    let chi = chi_from_kraus(&random::kraus_channel(&mut rng, 2, 2, 3), &reg).unwrap();
    let kits: Vec<_> = reg.qudits().iter().map(build_kit).collect::<Result<_, _>>().unwrap();
    let two = build_two_qudit_kit(reg.qudit(0), reg.qudit(1)).unwrap();
    assert_eq!(&convert_n(chi.data(), &kits).unwrap(), chi_to_s_2(&chi, &two).unwrap().data());
    let one = gm(2, 1);
    let chi1 = chi_from_kraus(&random::kraus_channel(&mut rng, 2, 1, 2), &one).unwrap();
    let kit1 = build_kit(one.qudit(0)).unwrap();
    assert_eq!(&convert_n(chi1.data(), std::slice::from_ref(&kit1)).unwrap(), chi_to_s(&chi1, &kit1).unwrap().data());

    let reg3 = gm(2, 3);
    let id = ChannelRepr::from(KrausChannel::identity(2, 3).unwrap()).to_chi(&reg3).unwrap();
    assert!(id.data().max_abs_diff(&single_entry(64, 8.0)) < 1e-12);
    let s = chi_to_s_n(&id).unwrap();
    assert!(s.data().max_abs_diff(&ComplexMatrix::identity(64)) < 1e-12);

    let k3 = random::kraus_channel(&mut rng, 2, 3, 4);
    let chi3 = chi_from_kraus(&k3, &reg3).unwrap();
    let back = s_to_chi_n(&chi_to_s_n(&chi3).unwrap()).unwrap();
    assert!(back.data().max_abs_diff(chi3.data()) < 1e-11);
    let kits3: Vec<_> = reg3.qudits().iter().map(build_kit).collect::<Result<_, _>>().unwrap();
    assert_eq!(&convert_factorized(chi3.data(), &kits3), chi_to_s_n(&chi3).unwrap().data());
}

#[test]
fn size_guard_rejects_large_registers() {
    let reg = gm(2, 7);
    let chi = ChannelRepr::from(KrausChannel::identity(2, 7).unwrap());
    assert!(matches!(chi.to_chi(&reg), Err(qopmat::QopError::SizeGuard { requested: 16384, cap: 4096 })));
}

#[test]
fn composition_examples() {
    let reg = gm(2, 1);
    let id = channels::identity(2, 1).unwrap().to_s(&reg).unwrap();
    let x = channels::by_name("X", 2).unwrap().to_s(&reg).unwrap();
    assert!(compose(&id, &x).unwrap().data().max_abs_diff(x.data()) < 1e-14);

    let dep = channels::depolarizing(2, 1).unwrap().to_s(&reg).unwrap();
    let twice = compose(&dep, &dep).unwrap();
    assert!(twice.data().max_abs_diff(&single_entry(4, 1.0)) < 1e-13);

    let wires = vec!["a".to_string(), "b".to_string()];
    let steps = vec![
        CircuitStep { channel: "X".into(), targets: vec![0] },
        CircuitStep { channel: "X".into(), targets: vec![0] },
    ];
    let mut chans = HashMap::new();
    chans.insert("X".to_string(), channels::by_name("X", 2).unwrap());
    let circuit = CircuitSpec::new(2, wires, steps).unwrap();
    let s = run_circuit(&circuit, &chans, &gm(2, 2)).unwrap();
    assert!(s.data().max_abs_diff(&ComplexMatrix::identity(16)) < 1e-12);
}

#[test]
fn unitary_circuit_has_rank_one_chi() {
    let mut chans = HashMap::new();
    for name in ["H", "CNOT", "T", "CZ"] {
        chans.insert(name.to_string(), channels::by_name(name, 2).unwrap());
    }
    let step = |c: &str, t: &[usize]| CircuitStep { channel: c.into(), targets: t.to_vec() };
    let circuit = CircuitSpec::new(
        2,
        vec!["a".into(), "b".into(), "c".into()],
        vec![step("H", &[0]), step("CNOT", &[0, 2]), step("T", &[1]), step("CZ", &[2, 1]), step("H", &[1])],
    )
    .unwrap();
    let s = run_circuit(&circuit, &chans, &gm(2, 3)).unwrap();
    let chi = s_to_chi_n(&s).unwrap();
    let e = chi.data().eigh().unwrap().eigenvalues;
    assert!((e[0] - 8.0).abs() < 1e-10);
    assert!(e[1..].iter().all(|l| l.abs() < 1e-10));
}

#[test]
fn lifted_qutrit_gate_matches_state_evolution() {
    let reg = ProductBasis::canonical(BasisKind::Weyl, 3, 2).unwrap();
    let shift = lift(&channels::by_name("X", 3).unwrap(), &[1], &reg).unwrap();
    let mut rho = ComplexMatrix::zeros(9, 9);
    rho[(0, 0)] = C64::new(1.0, 0.0);
    let mut expect = ComplexMatrix::zeros(9, 9);
    expect[(1, 1)] = C64::new(1.0, 0.0);
    assert!(shift.apply(&rho).unwrap().max_abs_diff(&expect) < 1e-12);
}

#[test]
fn tomography_examples() {
    for d in [2, 3] {
        let b = default_basis(d).unwrap();
        let rec = reconstruct(&simulate_dataset(&channels::identity(d, 1).unwrap(), &b, 0.0, 0).unwrap()).unwrap();
        let ideal = channels::identity(d, 1).unwrap().to_chi(&gm(d, 1)).unwrap();
        let f = qopmat::process_fidelity(&rec.chi, &ideal).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }
    let b = default_basis(2).unwrap();
    let mut rng = random::rng(41);
    let k: ChannelRepr = random::kraus_channel(&mut rng, 2, 2, 3).into();
    let rec = reconstruct(&simulate_dataset(&k, &b, 0.0, 0).unwrap()).unwrap();
    let truth = k.to_s(&gm(2, 2)).unwrap();
    assert!((rec.s.data() - truth.data()).frobenius_norm() < 1e-10);
}

#[test]
fn noisy_min_eigenvalue_shrinks_with_sigma() {
    let b = default_basis(2).unwrap();
    let unitary: ChannelRepr = channels::by_name("H", 2).unwrap();
    let mut medians = Vec::new();
    for sigma in [1e-2, 1e-3, 1e-4] {
        let mut mins: Vec<f64> = (0..21)
            .map(|seed| reconstruct(&simulate_dataset(&unitary, &b, sigma, seed).unwrap()).unwrap())
            .map(|r| r.report.min_chi_eigenvalue)
            .collect();
        mins.sort_by(f64::total_cmp);
        medians.push(mins[10]);
    }
    assert!(medians[0] < medians[1] && medians[1] < medians[2], "{medians:?}");
    assert!(medians.iter().all(|m| *m < 0.0));
    assert!(medians[2] > -1e-3);
}
