//! Primitive gates and their application to state vectors.
//!
//! Every gate here permutes computational basis states — no phases, no
//! mixing — so application is an index transformation on the amplitude
//! array, not a matrix multiply. Dense matrices ([`Gate::matrix`]) exist
//! only as a small-scale verification oracle.
//!
//! Qudit arithmetic comes in two modes. [`ArithMode::Modular`] wraps around
//! the dimension and always yields a unitary. [`ArithMode::Plain`] refuses
//! to wrap: any basis state with nonzero amplitude that would leave the
//! `0..d` range raises [`Error::ArithmeticRange`]. Plain mode turns the
//! claim that non-circular addition suffices for multiplexing (because the
//! qudit starts at `|0⟩`) into an assertion checked on every run.

use alloc::{boxed::Box, format, vec, vec::Vec};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{Register, StateVector};
use crate::matrix::{SquareMatrix, MAX_DENSE_DIM};

/// Direction of a shift: add or subtract the amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Whether qudit arithmetic wraps modulo the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithMode {
    #[default]
    Modular,
    Plain,
}

/// Flavor of the two-qudit controlled arithmetic gate with control value `x`
/// and target value `y`.
///
/// All three coincide with CNOT at `d = 2`; they differ for larger `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CxVariant {
    /// `y ← y ⊕ x`.
    Add,
    /// `y ← y ⊖ x`; inverse of `Add`.
    Subtract,
    /// `y ← x ⊖ y`; self-inverse. Needed for the three-gate swap, where a
    /// pure add/subtract sequence cannot reverse the pair for `d > 2`.
    Difference,
}

/// Shift a local index by `amount` within dimension `d`.
///
/// This is the action of the generalized NOT on one basis label: modular
/// mode maps `x` to `(x ± amount) mod d`; plain mode maps `x` to
/// `x ± amount` and errors if the result leaves `0..d`.
pub fn shift_local(d: usize, x: usize, amount: usize, sign: Sign, mode: ArithMode) -> Result<usize> {
    debug_assert!(x < d);
    match (mode, sign) {
        (ArithMode::Modular, Sign::Plus) => Ok((x + amount) % d),
        (ArithMode::Modular, Sign::Minus) => Ok((x + d - amount % d) % d),
        (ArithMode::Plain, Sign::Plus) => {
            let to = x + amount;
            if to < d {
                Ok(to)
            } else {
                Err(Error::ArithmeticRange { from: x, to: to as i64, dim: d })
            }
        }
        (ArithMode::Plain, Sign::Minus) => {
            if x >= amount {
                Ok(x - amount)
            } else {
                Err(Error::ArithmeticRange { from: x, to: x as i64 - amount as i64, dim: d })
            }
        }
    }
}

/// One primitive gate and the subsystems it touches.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// `X^d_m`-style shift of one subsystem's local index.
    Shift {
        target: usize,
        amount: usize,
        sign: Sign,
        mode: ArithMode,
    },
    /// Qubit-controlled constant shift of a target subsystem: identity when
    /// the control is `|0⟩`, shift by `amount` when it is `|1⟩`.
    ControlledAdd {
        control: usize,
        target: usize,
        amount: usize,
        sign: Sign,
        mode: ArithMode,
    },
    /// Two-qudit controlled arithmetic: the target moves by the control's
    /// value, per [`CxVariant`]. Control and target dimensions must match.
    GeneralizedCx {
        control: usize,
        target: usize,
        variant: CxVariant,
        mode: ArithMode,
    },
    /// Apply `inner` exactly on the amplitude slices where the control's
    /// local index lies in `set` (kept sorted), identity elsewhere.
    SetControlled {
        control: usize,
        set: Vec<usize>,
        inner: Box<Gate>,
    },
    /// Flip a qubit iff binary digit `digit` of the control's local index
    /// is 1; that is, iff the control index divided by `2^digit` is odd.
    DigitControlledFlip {
        control: usize,
        digit: u32,
        target: usize,
    },
}

/// A primitive gate plus an optional channel tag for block bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    channel_tag: Option<usize>,
}

impl Gate {
    /// Shift gate on one subsystem; `amount` must be below the subsystem
    /// dimension.
    pub fn shift(
        register: &Register,
        target: usize,
        amount: usize,
        sign: Sign,
        mode: ArithMode,
    ) -> Result<Self> {
        let gate = Self {
            kind: GateKind::Shift { target, amount, sign, mode },
            channel_tag: None,
        };
        gate.validate(register)?;
        Ok(gate)
    }

    /// Qubit-controlled shift of `target` by `amount`.
    pub fn controlled_add(
        register: &Register,
        control: usize,
        target: usize,
        amount: usize,
        sign: Sign,
        mode: ArithMode,
    ) -> Result<Self> {
        let gate = Self {
            kind: GateKind::ControlledAdd { control, target, amount, sign, mode },
            channel_tag: None,
        };
        gate.validate(register)?;
        Ok(gate)
    }

    /// Two-qudit controlled add (`Sign::Plus`) or subtract (`Sign::Minus`)
    /// of the control's value into the target: `|x⟩|y⟩ → |x⟩|y ± x⟩`.
    pub fn generalized_cx(
        register: &Register,
        control: usize,
        target: usize,
        sign: Sign,
        mode: ArithMode,
    ) -> Result<Self> {
        let variant = match sign {
            Sign::Plus => CxVariant::Add,
            Sign::Minus => CxVariant::Subtract,
        };
        Self::generalized_cx_variant(register, control, target, variant, mode)
    }

    /// Two-qudit controlled arithmetic with an explicit [`CxVariant`].
    pub fn generalized_cx_variant(
        register: &Register,
        control: usize,
        target: usize,
        variant: CxVariant,
        mode: ArithMode,
    ) -> Result<Self> {
        let gate = Self {
            kind: GateKind::GeneralizedCx { control, target, variant, mode },
            channel_tag: None,
        };
        gate.validate(register)?;
        Ok(gate)
    }

    /// Apply `inner` only where the control's local index lies in `set`.
    pub fn set_controlled(
        register: &Register,
        control: usize,
        set: impl IntoIterator<Item = usize>,
        inner: Gate,
    ) -> Result<Self> {
        let mut set: Vec<usize> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        let gate = Self {
            kind: GateKind::SetControlled { control, set, inner: Box::new(inner) },
            channel_tag: None,
        };
        gate.validate(register)?;
        Ok(gate)
    }

    /// Flip the target qubit iff binary digit `digit` of the control's
    /// local index is 1.
    pub fn digit_controlled_flip(
        register: &Register,
        control: usize,
        digit: u32,
        target: usize,
    ) -> Result<Self> {
        let gate = Self {
            kind: GateKind::DigitControlledFlip { control, digit, target },
            channel_tag: None,
        };
        gate.validate(register)?;
        Ok(gate)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    /// Channel this gate belongs to, if tagged by a circuit builder.
    pub fn channel_tag(&self) -> Option<usize> {
        self.channel_tag
    }

    pub fn with_channel_tag(mut self, channel: usize) -> Self {
        self.channel_tag = Some(channel);
        self
    }

    /// Subsystems referenced by the gate, control first.
    pub fn touched(&self) -> Vec<usize> {
        match &self.kind {
            GateKind::Shift { target, .. } => vec![*target],
            GateKind::ControlledAdd { control, target, .. }
            | GateKind::GeneralizedCx { control, target, .. }
            | GateKind::DigitControlledFlip { control, target, .. } => vec![*control, *target],
            GateKind::SetControlled { control, inner, .. } => {
                let mut t = vec![*control];
                t.extend(inner.touched());
                t
            }
        }
    }

    /// The inverse gate. Arithmetic gates flip sign; the difference variant
    /// and the digit-controlled flip are self-inverse.
    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            GateKind::Shift { target, amount, sign, mode } => GateKind::Shift {
                target: *target,
                amount: *amount,
                sign: sign.flipped(),
                mode: *mode,
            },
            GateKind::ControlledAdd { control, target, amount, sign, mode } => {
                GateKind::ControlledAdd {
                    control: *control,
                    target: *target,
                    amount: *amount,
                    sign: sign.flipped(),
                    mode: *mode,
                }
            }
            GateKind::GeneralizedCx { control, target, variant, mode } => GateKind::GeneralizedCx {
                control: *control,
                target: *target,
                variant: match variant {
                    CxVariant::Add => CxVariant::Subtract,
                    CxVariant::Subtract => CxVariant::Add,
                    CxVariant::Difference => CxVariant::Difference,
                },
                mode: *mode,
            },
            GateKind::SetControlled { control, set, inner } => GateKind::SetControlled {
                control: *control,
                set: set.clone(),
                inner: Box::new(inner.inverse()),
            },
            GateKind::DigitControlledFlip { .. } => self.kind.clone(),
        };
        Self { kind, channel_tag: self.channel_tag }
    }

    /// Check the gate against a register's dimensions.
    pub fn validate(&self, register: &Register) -> Result<()> {
        match &self.kind {
            GateKind::Shift { target, amount, .. } => {
                let d = register.dim_of(*target)?;
                if *amount >= d {
                    return Err(Error::Argument(format!(
                        "shift amount {amount} not below target dimension {d}"
                    )));
                }
            }
            GateKind::ControlledAdd { control, target, amount, .. } => {
                check_distinct(*control, *target)?;
                let dc = register.dim_of(*control)?;
                if dc != 2 {
                    return Err(Error::Dimension(format!(
                        "controlled add needs a qubit control, got dimension {dc}"
                    )));
                }
                let dt = register.dim_of(*target)?;
                if *amount >= dt {
                    return Err(Error::Argument(format!(
                        "add amount {amount} not below target dimension {dt}"
                    )));
                }
            }
            GateKind::GeneralizedCx { control, target, .. } => {
                check_distinct(*control, *target)?;
                let dc = register.dim_of(*control)?;
                let dt = register.dim_of(*target)?;
                if dc != dt {
                    return Err(Error::Dimension(format!(
                        "generalized CX needs equal dimensions, got {dc} and {dt}"
                    )));
                }
            }
            GateKind::SetControlled { control, set, inner } => {
                let dc = register.dim_of(*control)?;
                if let Some(&bad) = set.iter().find(|&&s| s >= dc) {
                    return Err(Error::Argument(format!(
                        "control set holds {bad}, outside the control's 0..{dc}"
                    )));
                }
                if inner.touched().contains(control) {
                    return Err(Error::Argument(
                        "inner gate of a set-controlled gate may not touch the control".into(),
                    ));
                }
                inner.validate(register)?;
            }
            GateKind::DigitControlledFlip { control, digit, target } => {
                check_distinct(*control, *target)?;
                let dc = register.dim_of(*control)?;
                if *digit >= usize::BITS || (1usize << digit) >= dc {
                    return Err(Error::Argument(format!(
                        "digit {digit} addresses nothing below control dimension {dc}"
                    )));
                }
                let dt = register.dim_of(*target)?;
                if dt != 2 {
                    return Err(Error::Dimension(format!(
                        "digit-controlled flip needs a qubit target, got dimension {dt}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Image of one composite basis index under the gate's permutation.
    pub fn image_of_basis(&self, register: &Register, index: usize) -> Result<usize> {
        match &self.kind {
            GateKind::Shift { target, amount, sign, mode } => {
                move_local(register, index, *target, |d, x| shift_local(d, x, *amount, *sign, *mode))
            }
            GateKind::ControlledAdd { control, target, amount, sign, mode } => {
                if register.local_at(index, *control) == 1 {
                    move_local(register, index, *target, |d, x| {
                        shift_local(d, x, *amount, *sign, *mode)
                    })
                } else {
                    Ok(index)
                }
            }
            GateKind::GeneralizedCx { control, target, variant, mode } => {
                let x = register.local_at(index, *control);
                move_local(register, index, *target, |d, y| match variant {
                    CxVariant::Add => shift_local(d, y, x, Sign::Plus, *mode),
                    CxVariant::Subtract => shift_local(d, y, x, Sign::Minus, *mode),
                    CxVariant::Difference => match mode {
                        ArithMode::Modular => Ok((x + d - y) % d),
                        ArithMode::Plain => {
                            if x >= y {
                                Ok(x - y)
                            } else {
                                Err(Error::ArithmeticRange {
                                    from: y,
                                    to: x as i64 - y as i64,
                                    dim: d,
                                })
                            }
                        }
                    },
                })
            }
            GateKind::SetControlled { control, set, inner } => {
                let x = register.local_at(index, *control);
                if set.binary_search(&x).is_ok() {
                    inner.image_of_basis(register, index)
                } else {
                    Ok(index)
                }
            }
            GateKind::DigitControlledFlip { control, digit, target } => {
                let x = register.local_at(index, *control);
                if (x >> digit) & 1 == 1 {
                    move_local(register, index, *target, |d, y| Ok((y + 1) % d))
                } else {
                    Ok(index)
                }
            }
        }
    }

    /// Apply the gate, returning a new state.
    ///
    /// In plain mode this errors iff some basis state with nonzero amplitude
    /// would leave its range; zero-amplitude states never trip the check.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let register = state.register();
        self.validate(register)?;
        let mut out = vec![C64::ZERO; register.dim()];
        for (i, &a) in state.amplitudes().iter().enumerate() {
            if a == C64::ZERO {
                continue;
            }
            let j = self.image_of_basis(register, i)?;
            debug_assert_eq!(out[j], C64::ZERO, "gate image must be injective");
            out[j] = a;
        }
        Ok(StateVector::from_raw(register.clone(), out))
    }

    /// Dense unitary of the gate on the register's composite space; column
    /// `k` is the gate applied to basis state `k`.
    ///
    /// Verification use only: the composite dimension must not exceed
    /// [`MAX_DENSE_DIM`], and in plain mode every basis state must stay in
    /// range for the full matrix to exist.
    pub fn matrix(&self, register: &Register) -> Result<SquareMatrix> {
        self.validate(register)?;
        let dim = register.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::Capacity(format!(
                "dense matrix of dimension {dim} exceeds the {MAX_DENSE_DIM} bound"
            )));
        }
        let mut m = SquareMatrix::zeros(dim);
        for k in 0..dim {
            m.set(self.image_of_basis(register, k)?, k, C64::ONE);
        }
        Ok(m)
    }
}

fn check_distinct(control: usize, target: usize) -> Result<()> {
    if control == target {
        return Err(Error::Argument(format!(
            "control and target must be distinct, both are {control}"
        )));
    }
    Ok(())
}

/// Rewrite one subsystem's local index inside a composite index.
fn move_local(
    register: &Register,
    index: usize,
    subsystem: usize,
    f: impl FnOnce(usize, usize) -> Result<usize>,
) -> Result<usize> {
    let d = register.dim_of(subsystem)?;
    let stride = register.stride(subsystem)?;
    let x = (index / stride) % d;
    let y = f(d, x)?;
    Ok(index - x * stride + y * stride)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng as _, SeedableRng as _};

    fn qubit_qudit() -> Register {
        Register::new(vec![2, 8]).unwrap()
    }

    fn random_state(register: &Register, rng: &mut StdRng) -> StateVector {
        let dim = register.dim();
        let mut amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(register.clone(), amps).unwrap()
    }

    fn random_gate(register: &Register, rng: &mut StdRng) -> Gate {
        // Register is [2, 8]: subsystem 0 is the qubit, 1 the qudit.
        match rng.random_range(0..5) {
            0 => Gate::shift(register, 1, rng.random_range(0..8), Sign::Plus, ArithMode::Modular),
            1 => Gate::shift(register, 1, rng.random_range(0..8), Sign::Minus, ArithMode::Modular),
            2 => Gate::controlled_add(
                register,
                0,
                1,
                rng.random_range(0..8),
                if rng.random() { Sign::Plus } else { Sign::Minus },
                ArithMode::Modular,
            ),
            3 => {
                let set: Vec<usize> = (0..8).filter(|_| rng.random()).collect();
                let inner =
                    Gate::shift(register, 1, rng.random_range(0..8), Sign::Plus, ArithMode::Modular)
                        .unwrap();
                Gate::set_controlled(register, 1, set, inner.clone()).or_else(|_| {
                    // Control 1 would collide with the inner target; flip roles.
                    Gate::digit_controlled_flip(register, 1, rng.random_range(0..3), 0)
                })
            }
            _ => Gate::digit_controlled_flip(register, 1, rng.random_range(0..3), 0),
        }
        .unwrap()
    }

    #[test]
    fn shift_local_matches_generalized_not() {
        // X^2_1 = NOT.
        assert_eq!(shift_local(2, 0, 1, Sign::Plus, ArithMode::Modular).unwrap(), 1);
        assert_eq!(shift_local(2, 1, 1, Sign::Plus, ArithMode::Modular).unwrap(), 0);
        // m = 0 is the identity.
        for x in 0..8 {
            assert_eq!(shift_local(8, x, 0, Sign::Plus, ArithMode::Modular).unwrap(), x);
        }
        // (5 + 4) mod 8 = 1.
        assert_eq!(shift_local(8, 5, 4, Sign::Plus, ArithMode::Modular).unwrap(), 1);
        assert_eq!(shift_local(8, 1, 4, Sign::Minus, ArithMode::Modular).unwrap(), 5);
    }

    #[test]
    fn plain_shift_raises_on_range_exit() {
        assert!(matches!(
            shift_local(8, 5, 4, Sign::Plus, ArithMode::Plain),
            Err(Error::ArithmeticRange { from: 5, to: 9, dim: 8 })
        ));
        assert!(matches!(
            shift_local(8, 1, 4, Sign::Minus, ArithMode::Plain),
            Err(Error::ArithmeticRange { from: 1, to: -3, dim: 8 })
        ));
        assert_eq!(shift_local(8, 3, 4, Sign::Plus, ArithMode::Plain).unwrap(), 7);
    }

    #[test]
    fn plain_shift_errors_only_on_occupied_states() {
        let reg = Register::new(vec![4]).unwrap();
        let plus_two = Gate::shift(&reg, 0, 2, Sign::Plus, ArithMode::Plain).unwrap();
        // |1⟩ shifts fine.
        let s = StateVector::basis_state(reg.clone(), &[1]).unwrap();
        let out = plus_two.apply(&s).unwrap();
        assert_eq!(out.amplitudes()[3], C64::ONE);
        // |3⟩ would leave the range.
        let s = StateVector::basis_state(reg.clone(), &[3]).unwrap();
        assert!(matches!(plus_two.apply(&s), Err(Error::ArithmeticRange { .. })));
        // A superposition avoiding the top states is still legal.
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(
            reg,
            vec![C64::new(r, 0.0), C64::new(r, 0.0), C64::ZERO, C64::ZERO],
        )
        .unwrap();
        assert!(plus_two.apply(&s).is_ok());
    }

    #[test]
    fn controlled_add_branches_on_the_qubit() {
        let reg = qubit_qudit();
        let cx84 = Gate::controlled_add(&reg, 0, 1, 4, Sign::Plus, ArithMode::Modular).unwrap();
        // |1⟩|0⟩ → |1⟩|4⟩.
        let s = StateVector::basis_state(reg.clone(), &[1, 0]).unwrap();
        let out = cx84.apply(&s).unwrap();
        assert_eq!(out.amplitudes()[reg.composite_index(&[1, 4]).unwrap()], C64::ONE);
        // Control |0⟩ is the identity branch.
        for y in 0..8 {
            let s = StateVector::basis_state(reg.clone(), &[0, y]).unwrap();
            let out = cx84.apply(&s).unwrap();
            assert_eq!(out.amplitudes(), s.amplitudes());
        }
    }

    #[test]
    fn controlled_add_rejects_collision_and_wide_control() {
        let reg = qubit_qudit();
        assert!(matches!(
            Gate::controlled_add(&reg, 1, 1, 1, Sign::Plus, ArithMode::Modular),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            Gate::controlled_add(&reg, 1, 0, 1, Sign::Plus, ArithMode::Modular),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn generalized_cx_copies_onto_zero_target() {
        let reg = Register::new(vec![8, 8]).unwrap();
        let cx = Gate::generalized_cx(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        for x in 0..8 {
            let s = StateVector::basis_state(reg.clone(), &[x, 0]).unwrap();
            let out = cx.apply(&s).unwrap();
            assert_eq!(out.amplitudes()[reg.composite_index(&[x, x]).unwrap()], C64::ONE);
        }
    }

    #[test]
    fn generalized_cx_at_d2_is_cnot() {
        let reg = Register::new(vec![2, 2]).unwrap();
        let cx = Gate::generalized_cx(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        let truth = [(0, 0), (1, 1), (2, 3), (3, 2)];
        for (from, to) in truth {
            assert_eq!(cx.image_of_basis(&reg, from).unwrap(), to);
        }
    }

    #[test]
    fn generalized_cx_rejects_dimension_mismatch() {
        let reg = qubit_qudit();
        assert!(matches!(
            Gate::generalized_cx(&reg, 0, 1, Sign::Plus, ArithMode::Modular),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn generalized_cx_then_inverse_is_identity() {
        let reg = Register::new(vec![8, 8]).unwrap();
        let cx = Gate::generalized_cx(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        let inv = cx.inverse();
        // Matrix-product oracle.
        let product = cx.matrix(&reg).unwrap().mul(&inv.matrix(&reg).unwrap()).unwrap();
        assert!(product.is_identity(tol::ORACLE));
        // And on random states through the application path.
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let s = random_state(&reg, &mut rng);
            let back = inv.apply(&cx.apply(&s).unwrap()).unwrap();
            assert!(s.max_deviation(&back).unwrap() < tol::ORACLE);
        }
    }

    #[test]
    fn set_controlled_full_set_is_unconditional_and_empty_is_identity() {
        let reg = qubit_qudit();
        let inner = Gate::shift(&reg, 1, 3, Sign::Plus, ArithMode::Modular).unwrap();
        let full = Gate::set_controlled(&reg, 0, 0..2, inner.clone()).unwrap();
        let empty = Gate::set_controlled(&reg, 0, core::iter::empty(), inner.clone()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let s = random_state(&reg, &mut rng);
            assert!(full
                .apply(&s)
                .unwrap()
                .max_deviation(&inner.apply(&s).unwrap())
                .unwrap()
                < 1e-15);
            assert!(empty.apply(&s).unwrap().max_deviation(&s).unwrap() < 1e-15);
        }
    }

    #[test]
    fn set_controlled_rejects_out_of_range_set_and_control_overlap() {
        let reg = qubit_qudit();
        let inner = Gate::shift(&reg, 1, 3, Sign::Plus, ArithMode::Modular).unwrap();
        assert!(matches!(
            Gate::set_controlled(&reg, 0, [2], inner.clone()),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            Gate::set_controlled(&reg, 1, [0], inner),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn digit_controlled_flip_reads_binary_digits() {
        let reg = Register::new(vec![2, 8]).unwrap();
        // Control |4⟩ = 100₂: digit 2 fires, digit 0 does not.
        let flip2 = Gate::digit_controlled_flip(&reg, 1, 2, 0).unwrap();
        let s = StateVector::basis_state(reg.clone(), &[1, 4]).unwrap();
        let out = flip2.apply(&s).unwrap();
        assert_eq!(out.amplitudes()[reg.composite_index(&[0, 4]).unwrap()], C64::ONE);

        let flip0 = Gate::digit_controlled_flip(&reg, 1, 0, 0).unwrap();
        let out = flip0.apply(&s).unwrap();
        assert_eq!(out.amplitudes(), s.amplitudes());

        // (|2⟩ + |6⟩)/√2 has digit 1 set on both branches.
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::ZERO; 16];
        amps[reg.composite_index(&[1, 2]).unwrap()] = C64::new(r, 0.0);
        amps[reg.composite_index(&[1, 6]).unwrap()] = C64::new(r, 0.0);
        let s = StateVector::from_amplitudes(reg.clone(), amps).unwrap();
        let flip1 = Gate::digit_controlled_flip(&reg, 1, 1, 0).unwrap();
        let out = flip1.apply(&s).unwrap();
        assert!((out.amplitudes()[reg.composite_index(&[0, 2]).unwrap()].re - r).abs() < 1e-15);
        assert!((out.amplitudes()[reg.composite_index(&[0, 6]).unwrap()].re - r).abs() < 1e-15);
    }

    #[test]
    fn digit_flip_rejects_high_digit_and_wide_target() {
        let reg = Register::new(vec![2, 8]).unwrap();
        assert!(matches!(
            Gate::digit_controlled_flip(&reg, 1, 3, 0),
            Err(Error::Argument(_))
        ));
        let reg = Register::new(vec![4, 8]).unwrap();
        assert!(matches!(
            Gate::digit_controlled_flip(&reg, 1, 0, 0),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn gate_matrix_of_not_and_cnot() {
        let reg = Register::new(vec![2]).unwrap();
        let x = Gate::shift(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        let m = x.matrix(&reg).unwrap();
        assert_eq!(m.get(0, 1), C64::ONE);
        assert_eq!(m.get(1, 0), C64::ONE);
        assert_eq!(m.get(0, 0), C64::ZERO);

        let reg = Register::new(vec![2, 2]).unwrap();
        let cnot = Gate::generalized_cx(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        let m = cnot.matrix(&reg).unwrap();
        let expected = SquareMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert!(m.max_entry_deviation(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn gate_matrix_respects_capacity_bound() {
        let reg = Register::new(vec![2, 8192]).unwrap();
        let g = Gate::shift(&reg, 1, 1, Sign::Plus, ArithMode::Modular).unwrap();
        assert!(matches!(g.matrix(&reg), Err(Error::Capacity(_))));
    }

    #[test]
    fn random_gates_are_unitary_permutations_with_unitary_inverses() {
        let reg = qubit_qudit();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..50 {
            let g = random_gate(&reg, &mut rng);
            let m = g.matrix(&reg).unwrap();
            assert!(m.is_unitary(tol::ORACLE));
            assert!(m.is_permutation(0.0));
            let product = m.mul(&g.inverse().matrix(&reg).unwrap()).unwrap();
            assert!(product.is_identity(tol::ORACLE));
        }
    }

    #[test]
    fn disjoint_set_controls_commute() {
        let reg = qubit_qudit();
        let inner_a = Gate::shift(&reg, 0, 1, Sign::Plus, ArithMode::Modular).unwrap();
        let a = Gate::set_controlled(&reg, 1, [0, 2, 5], inner_a.clone()).unwrap();
        let b = Gate::set_controlled(&reg, 1, [1, 4], inner_a).unwrap();
        let ab = a.matrix(&reg).unwrap().mul(&b.matrix(&reg).unwrap()).unwrap();
        let ba = b.matrix(&reg).unwrap().mul(&a.matrix(&reg).unwrap()).unwrap();
        assert!(ab.max_entry_deviation(&ba).unwrap() < tol::ORACLE);
    }

    proptest! {
        #[test]
        fn application_preserves_norm_and_linearity(seed in 0u64..512) {
            let reg = qubit_qudit();
            let mut rng = StdRng::seed_from_u64(seed);
            let g = random_gate(&reg, &mut rng);
            let s1 = random_state(&reg, &mut rng);
            let s2 = random_state(&reg, &mut rng);

            let out1 = g.apply(&s1).unwrap();
            prop_assert!((out1.norm_sqr() - 1.0).abs() < tol::INVARIANT);

            // Superpose, apply, and compare with applying first.
            let w1 = C64::new(0.6, 0.2);
            let w2 = C64::new(-0.3, 0.7);
            let mixed: Vec<C64> = s1
                .amplitudes()
                .iter()
                .zip(s2.amplitudes())
                .map(|(a, b)| w1 * a + w2 * b)
                .collect();
            let norm = mixed.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let mixed: Vec<C64> = mixed.into_iter().map(|a| a / norm).collect();
            let mixed = StateVector::from_amplitudes(reg.clone(), mixed).unwrap();

            let out2 = g.apply(&s2).unwrap();
            let out_mixed = g.apply(&mixed).unwrap();
            let recombined: Vec<C64> = out1
                .amplitudes()
                .iter()
                .zip(out2.amplitudes())
                .map(|(a, b)| (w1 * a + w2 * b) / norm)
                .collect();
            let max_dev = out_mixed
                .amplitudes()
                .iter()
                .zip(&recombined)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            prop_assert!(max_dev < tol::ORACLE);
        }
    }
}
