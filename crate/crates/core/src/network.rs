//! Gate networks for the copier: the two-qubit preparation circuit and the
//! controlled-NOT copy stage for `1 → 1+n` cloning.
//!
//! Wires of a copy network are ordered `a0, a1..an, b1..bn` in the global
//! tensor order: the original, the copy qubits, then the idle qubits.

use std::fmt;
use std::str::FromStr;

use crate::error::{out_of_range, Error, Result};
use crate::qlin::{StateVector, TensorProduct, C64};
use crate::states::{bloch_ket, prep_state, BlochQubit};

/// Largest copy count accepted by the network builders.
pub const MAX_COPIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    /// `|0⟩ → cos θ|0⟩ + sin θ|1⟩`, `|1⟩ → −sin θ|0⟩ + cos θ|1⟩`.
    Rotation {
        wire: usize,
        theta: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl GateOp {
    fn check(&self, width: usize) -> Result<()> {
        let in_range = |wire: usize| {
            if wire < width {
                Ok(())
            } else {
                Err(Error::WireOutOfRange { wire, width })
            }
        };
        match *self {
            GateOp::Rotation { wire, .. } => in_range(wire),
            GateOp::Cnot { control, target } => {
                in_range(control)?;
                in_range(target)?;
                if control == target {
                    return Err(Error::WireClash(control));
                }
                Ok(())
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            GateOp::Rotation { wire, theta } => GateOp::Rotation {
                wire,
                theta: -theta,
            },
            cx @ GateOp::Cnot { .. } => cx,
        }
    }
}

/// Ordered gate list on `width` qubit wires. Gates run first to last.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.check(self.width)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn rotation(&mut self, wire: usize, theta: f64) -> Result<&mut Self> {
        self.push(GateOp::Rotation { wire, theta })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateOp::Cnot { control, target })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Gate-by-gate inverse in reverse order.
    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    pub fn count_rotations(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, GateOp::Rotation { .. }))
            .count()
    }

    pub fn count_cnots(&self) -> usize {
        self.len() - self.count_rotations()
    }
}

/// Line format: a `WIDTH <n>` header, then one gate per line as
/// `R <wire> <theta>` or `CX <control> <target>`. Angles are written in the
/// shortest form that parses back to the same `f64`.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WIDTH {}", self.width)?;
        for op in &self.ops {
            match op {
                GateOp::Rotation { wire, theta } => writeln!(f, "R {wire} {theta:?}")?,
                GateOp::Cnot { control, target } => writeln!(f, "CX {control} {target}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    /// Blank lines and lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let fields: Vec<&str> = text.split_whitespace().collect();
            let int = |field: &str| {
                field
                    .parse::<usize>()
                    .map_err(|e| err(format!("bad integer {field:?}: {e}")))
            };
            match (&mut circuit, fields.as_slice()) {
                (None, ["WIDTH", n]) => circuit = Some(Circuit::new(int(n)?)),
                (None, _) => return Err(err("expected `WIDTH <n>` header".into())),
                (Some(_), ["WIDTH", ..]) => return Err(err("duplicate WIDTH header".into())),
                (Some(c), ["R", wire, theta]) => {
                    let theta = theta
                        .parse::<f64>()
                        .map_err(|e| err(format!("bad angle {theta:?}: {e}")))?;
                    c.rotation(int(wire)?, theta)
                        .map_err(|e| err(e.to_string()))?;
                }
                (Some(c), ["CX", control, target]) => {
                    c.cnot(int(control)?, int(target)?)
                        .map_err(|e| err(e.to_string()))?;
                }
                (Some(_), _) => return Err(err(format!("unrecognized gate line {text:?}"))),
            }
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            message: "empty circuit text".into(),
        })
    }
}

fn qubit_count(psi: &StateVector) -> Result<usize> {
    for (wire, &dim) in psi.layout().dims().iter().enumerate() {
        if dim != 2 {
            return Err(Error::NotAQubit { wire, dim });
        }
    }
    Ok(psi.layout().len())
}

fn rotate_in_place(amps: &mut [C64], width: usize, wire: usize, theta: f64) {
    let stride = 1usize << (width - 1 - wire);
    let (s, c) = theta.sin_cos();
    for i in 0..amps.len() {
        if i & stride == 0 {
            let (a0, a1) = (amps[i], amps[i | stride]);
            amps[i] = a0 * c - a1 * s;
            amps[i | stride] = a0 * s + a1 * c;
        }
    }
}

fn cnot_in_place(amps: &mut [C64], width: usize, control: usize, target: usize) {
    let cs = 1usize << (width - 1 - control);
    let ts = 1usize << (width - 1 - target);
    for i in 0..amps.len() {
        if i & cs != 0 && i & ts == 0 {
            amps.swap(i, i | ts);
        }
    }
}

pub fn apply_rotation(psi: &StateVector, wire: usize, theta: f64) -> Result<StateVector> {
    let width = qubit_count(psi)?;
    GateOp::Rotation { wire, theta }.check(width)?;
    let mut amps = psi.amps().to_vec();
    rotate_in_place(&mut amps, width, wire, theta);
    Ok(StateVector::from_parts(psi.layout().clone(), amps))
}

pub fn apply_cnot(psi: &StateVector, control: usize, target: usize) -> Result<StateVector> {
    let width = qubit_count(psi)?;
    GateOp::Cnot { control, target }.check(width)?;
    let mut amps = psi.amps().to_vec();
    cnot_in_place(&mut amps, width, control, target);
    Ok(StateVector::from_parts(psi.layout().clone(), amps))
}

pub fn run_circuit(c: &Circuit, psi: &StateVector) -> Result<StateVector> {
    let width = qubit_count(psi)?;
    if width != c.width {
        return Err(Error::WidthMismatch {
            circuit: c.width,
            state: width,
        });
    }
    let mut amps = psi.amps().to_vec();
    for op in &c.ops {
        match *op {
            GateOp::Rotation { wire, theta } => rotate_in_place(&mut amps, width, wire, theta),
            GateOp::Cnot { control, target } => cnot_in_place(&mut amps, width, control, target),
        }
    }
    Ok(StateVector::from_parts(psi.layout().clone(), amps))
}

/// Rotation angles `θ_j = ½ acos(·)` of the two-qubit preparation circuit.
pub fn prep_angles() -> [f64; 3] {
    let s5 = 5f64.sqrt();
    [
        0.5 * (1.0 / s5).acos(),
        0.5 * (s5 / 3.0).acos(),
        0.5 * (2.0 / s5).acos(),
    ]
}

/// Prepares `(2|00⟩ + |01⟩ + |11⟩)/√6` on wires `(a1, b1) = (0, 1)` from `|00⟩`:
/// `R_a1(θ1)`, `CX a1→b1`, `R_b1(θ2)`, `CX b1→a1`, `R_a1(θ3)`.
pub fn build_prep_circuit_1() -> Circuit {
    let [t1, t2, t3] = prep_angles();
    let mut c = Circuit::new(2);
    c.rotation(0, t1)
        .and_then(|c| c.cnot(0, 1))
        .and_then(|c| c.rotation(1, t2))
        .and_then(|c| c.cnot(1, 0))
        .and_then(|c| c.rotation(0, t3))
        .expect("static two-wire circuit");
    c
}

/// Wire indices of a `1 → 1+n` copy network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyWires {
    pub n: usize,
}

impl CopyWires {
    pub fn width(&self) -> usize {
        2 * self.n + 1
    }

    pub fn original(&self) -> usize {
        0
    }

    /// Copy qubit `a_j`, `1 ≤ j ≤ n`.
    pub fn copy(&self, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&j));
        j
    }

    /// Idle qubit `b_j`, `1 ≤ j ≤ n`.
    pub fn idle(&self, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&j));
        self.n + j
    }

    /// `a0, a1..an`.
    pub fn clones(&self) -> Vec<usize> {
        (0..=self.n).collect()
    }

    pub fn idles(&self) -> Vec<usize> {
        (self.n + 1..=2 * self.n).collect()
    }
}

fn check_copies(n: usize) -> Result<()> {
    if (1..=MAX_COPIES).contains(&n) {
        Ok(())
    } else {
        out_of_range("n", n as f64, "1 ≤ n ≤ 8")
    }
}

/// Controlled-NOT cascade: `a0` onto every copy qubit, then onto every idle
/// qubit, then every copy qubit onto `a0`, then every idle qubit onto `a0`.
pub fn build_copy_stage(n: usize) -> Result<Circuit> {
    check_copies(n)?;
    let w = CopyWires { n };
    let mut c = Circuit::new(w.width());
    for j in 1..=n {
        c.cnot(w.original(), w.copy(j))?;
    }
    for j in 1..=n {
        c.cnot(w.original(), w.idle(j))?;
    }
    for j in 1..=n {
        c.cnot(w.copy(j), w.original())?;
    }
    for j in 1..=n {
        c.cnot(w.idle(j), w.original())?;
    }
    Ok(c)
}

/// Runs `|Ψ⟩_{a0} ⊗ prep_state(n)` through [`build_copy_stage`]`(n)`.
pub fn clone_via_network(q: &BlochQubit, n: usize) -> Result<StateVector> {
    check_copies(n)?;
    let input = bloch_ket(q).tensor(&prep_state(n)?);
    run_circuit(&build_copy_stage(n)?, &input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::SubsystemLayout;
    use crate::states::{haar_random_ket, seeded_rng};
    use std::f64::consts::FRAC_PI_2;

    fn basis(bits: &[usize]) -> StateVector {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << bits.len()];
        let idx = bits.iter().fold(0, |acc, b| acc * 2 + b);
        amps[idx] = C64::new(1.0, 0.0);
        StateVector::new(SubsystemLayout::qubits(bits.len()), amps).unwrap()
    }

    fn random_qubits(n: usize, seed: u64) -> StateVector {
        haar_random_ket(1 << n, seed)
            .unwrap()
            .with_layout(SubsystemLayout::qubits(n))
            .unwrap()
    }

    #[test]
    fn rotation_examples() {
        let psi = random_qubits(3, 1);
        let same = apply_rotation(&psi, 1, 0.0).unwrap();
        assert_eq!(same, psi);
        let r = apply_rotation(&basis(&[0]), 0, FRAC_PI_2).unwrap();
        assert!((r.amps()[1].re - 1.0).abs() < 1e-15 && r.amps()[0].norm() < 1e-15);
        let back = apply_rotation(&apply_rotation(&psi, 2, 0.7).unwrap(), 2, -0.7).unwrap();
        assert!(back.overlap(&psi).unwrap() > 1.0 - 1e-14);
        assert!(matches!(
            apply_rotation(&psi, 3, 0.1),
            Err(Error::WireOutOfRange { wire: 3, width: 3 })
        ));
    }

    #[test]
    fn rotation_matches_definition_on_both_basis_states() {
        let t = 0.3;
        let r0 = apply_rotation(&basis(&[0]), 0, t).unwrap();
        let r1 = apply_rotation(&basis(&[1]), 0, t).unwrap();
        assert!((r0.amps()[0].re - t.cos()).abs() < 1e-15);
        assert!((r0.amps()[1].re - t.sin()).abs() < 1e-15);
        assert!((r1.amps()[0].re + t.sin()).abs() < 1e-15);
        assert!((r1.amps()[1].re - t.cos()).abs() < 1e-15);
    }

    #[test]
    fn cnot_truth_table() {
        let cases = [
            ([0, 0], [0, 0]),
            ([0, 1], [0, 1]),
            ([1, 0], [1, 1]),
            ([1, 1], [1, 0]),
        ];
        for (input, output) in cases {
            assert_eq!(apply_cnot(&basis(&input), 0, 1).unwrap(), basis(&output));
        }
        let psi = random_qubits(3, 2);
        let twice = apply_cnot(&apply_cnot(&psi, 2, 0).unwrap(), 2, 0).unwrap();
        assert_eq!(twice, psi);
        assert!(matches!(apply_cnot(&psi, 1, 1), Err(Error::WireClash(1))));
    }

    #[test]
    fn gates_reject_non_qubit_layouts() {
        let psi = haar_random_ket(3, 0).unwrap();
        assert!(matches!(
            apply_rotation(&psi, 0, 0.1),
            Err(Error::NotAQubit { .. })
        ));
    }

    #[test]
    fn prep_circuit_structure_and_output() {
        let c = build_prep_circuit_1();
        assert_eq!((c.width(), c.count_rotations(), c.count_cnots()), (2, 3, 2));
        let out = run_circuit(&c, &basis(&[0, 0])).unwrap();
        let s6 = 6f64.sqrt();
        let expect = [2.0 / s6, 1.0 / s6, 0.0, 1.0 / s6];
        for (a, e) in out.amps().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-12 && a.im.abs() < 1e-15);
        }
        assert!(out.overlap(&prep_state(1).unwrap()).unwrap() > 1.0 - 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn run_circuit_identity_cases() {
        let psi = random_qubits(2, 5);
        assert_eq!(run_circuit(&Circuit::new(2), &psi).unwrap(), psi);
        let c = build_prep_circuit_1();
        let back = run_circuit(&c.inverse(), &run_circuit(&c, &psi).unwrap()).unwrap();
        assert!(back.overlap(&psi).unwrap() > 1.0 - 1e-13);
        assert!(matches!(
            run_circuit(&c, &random_qubits(3, 0)),
            Err(Error::WidthMismatch {
                circuit: 2,
                state: 3
            })
        ));
    }

    #[test]
    fn copy_stage_order() {
        let c = build_copy_stage(1).unwrap();
        let expect = [(0, 1), (0, 2), (1, 0), (2, 0)];
        let got: Vec<(usize, usize)> = c
            .ops()
            .iter()
            .map(|op| match *op {
                GateOp::Cnot { control, target } => (control, target),
                GateOp::Rotation { .. } => panic!("rotation in copy stage"),
            })
            .collect();
        assert_eq!(got, expect);
        assert_eq!(build_copy_stage(2).unwrap().count_cnots(), 8);
        assert!(build_copy_stage(0).is_err());
        assert!(build_copy_stage(9).is_err());
    }

    #[test]
    fn single_copy_output_amplitudes() {
        // |Φ0⟩|0⟩ + |Φ1⟩|1⟩ expanded at α = β = 1/√2, ordering a0 a1 b1
        let q = BlochQubit::default();
        let out = clone_via_network(&q, 1).unwrap();
        let h = 0.5f64.sqrt();
        let (r23, r13) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
        let plus = h * r13 * h; // β/√3 · 1/√2
        let expect = [
            h * r23, // |000⟩: α√(2/3)
            0.0,     // |001⟩
            plus,    // |010⟩: from β|+⟩|0⟩
            plus,    // |011⟩: from α|+⟩|1⟩
            plus,    // |100⟩
            plus,    // |101⟩
            0.0,     // |110⟩
            h * r23, // |111⟩: β√(2/3)
        ];
        for (i, (a, e)) in out.amps().iter().zip(expect).enumerate() {
            assert!((a.re - e).abs() < 1e-12 && a.im.abs() < 1e-12, "index {i}");
        }
    }

    #[test]
    fn circuits_preserve_norm() {
        let mut rng = seeded_rng(3);
        for n in 1..=4 {
            let c = build_copy_stage(n).unwrap();
            let psi = crate::states::haar_random_ket_with(1 << c.width(), &mut rng)
                .unwrap()
                .with_layout(SubsystemLayout::qubits(c.width()))
                .unwrap();
            let out = run_circuit(&c, &psi).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn text_format_round_trip() {
        let c = build_prep_circuit_1();
        let text = c.to_string();
        assert!(text.starts_with("WIDTH 2\nR 0 "));
        assert_eq!(text.lines().count(), 6);
        assert_eq!(text.parse::<Circuit>().unwrap(), c);
        let copy = build_copy_stage(3).unwrap();
        assert_eq!(copy.to_string().parse::<Circuit>().unwrap(), copy);
    }

    #[test]
    fn text_format_errors() {
        assert!("R 0 0.1".parse::<Circuit>().is_err());
        assert!("".parse::<Circuit>().is_err());
        assert!("WIDTH 2\nCX 0 0".parse::<Circuit>().is_err());
        assert!("WIDTH 2\nCX 0 2".parse::<Circuit>().is_err());
        assert!("WIDTH 2\nH 0".parse::<Circuit>().is_err());
        assert!("WIDTH 2\nR 0 abc".parse::<Circuit>().is_err());
        let c = "# comment\nWIDTH 3\n\nCX 2 0\n".parse::<Circuit>().unwrap();
        assert_eq!(
            c.ops(),
            &[GateOp::Cnot {
                control: 2,
                target: 0
            }]
        );
    }
}
