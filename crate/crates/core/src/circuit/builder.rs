use super::{
    validate, Circuit, ClassBit, GadgetSpan, GadgetTag, Instruction, Op, QubitId, Register,
    ValidationError,
};

/// Single-owner builder for [`Circuit`]s.
///
/// Fresh qubit and classical-bit identifiers are handed out in allocation
/// order. [`CircuitBuilder::finish`] validates the result.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    instructions: Vec<Instruction>,
    spans: Vec<GadgetSpan>,
    open_span: Option<(usize, GadgetTag)>,
    next_qubit: u32,
    next_bit: u32,
    inputs: Vec<Register>,
    outputs: Vec<Register>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a register of `len` fresh qubits that are live at circuit start.
    pub fn input(&mut self, name: &str, len: usize) -> Vec<QubitId> {
        let qubits: Vec<QubitId> = (0..len).map(|_| self.fresh_qubit()).collect();
        self.inputs.push(Register::new(name, qubits.clone()));
        qubits
    }

    pub fn output(&mut self, name: &str, qubits: &[QubitId]) {
        self.outputs.push(Register::new(name, qubits.to_vec()));
    }

    pub fn fresh_qubit(&mut self) -> QubitId {
        let q = QubitId(self.next_qubit);
        self.next_qubit += 1;
        q
    }

    pub fn fresh_bit(&mut self) -> ClassBit {
        let c = ClassBit(self.next_bit);
        self.next_bit += 1;
        c
    }

    /// Reserves identifiers so that fresh ones do not collide with an existing circuit.
    pub fn reserve(&mut self, qubits: usize, bits: usize) {
        self.next_qubit = self.next_qubit.max(qubits as u32);
        self.next_bit = self.next_bit.max(bits as u32);
    }

    pub(crate) fn set_registers(&mut self, inputs: Vec<Register>, outputs: Vec<Register>) {
        self.inputs = inputs;
        self.outputs = outputs;
    }

    pub fn push(&mut self, instruction: Instruction) {
        self.instructions.push(instruction);
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    fn gate(&mut self, op: Op, qubits: &[QubitId]) {
        self.push(Instruction::new(op, qubits.to_vec()));
    }

    pub fn x(&mut self, q: QubitId) {
        self.gate(Op::X, &[q]);
    }
    pub fn y(&mut self, q: QubitId) {
        self.gate(Op::Y, &[q]);
    }
    pub fn z(&mut self, q: QubitId) {
        self.gate(Op::Z, &[q]);
    }
    pub fn h(&mut self, q: QubitId) {
        self.gate(Op::H, &[q]);
    }
    pub fn s(&mut self, q: QubitId) {
        self.gate(Op::S, &[q]);
    }
    pub fn sdg(&mut self, q: QubitId) {
        self.gate(Op::Sdg, &[q]);
    }
    pub fn t(&mut self, q: QubitId) {
        self.gate(Op::T, &[q]);
    }
    pub fn tdg(&mut self, q: QubitId) {
        self.gate(Op::Tdg, &[q]);
    }
    pub fn rz(&mut self, angle: f64, q: QubitId) {
        self.gate(Op::Rz(angle), &[q]);
    }
    pub fn cx(&mut self, control: QubitId, target: QubitId) {
        self.gate(Op::Cx, &[control, target]);
    }
    pub fn cz(&mut self, a: QubitId, b: QubitId) {
        self.gate(Op::Cz, &[a, b]);
    }
    pub fn ccx(&mut self, a: QubitId, b: QubitId, target: QubitId) {
        self.gate(Op::Ccx, &[a, b, target]);
    }

    pub fn alloc_zero(&mut self) -> QubitId {
        let q = self.fresh_qubit();
        self.gate(Op::AllocZero, &[q]);
        q
    }

    pub fn alloc_t(&mut self) -> QubitId {
        let q = self.fresh_qubit();
        self.gate(Op::AllocT, &[q]);
        q
    }

    /// Re-allocates a previously released qubit in |0⟩.
    pub fn realloc_zero(&mut self, q: QubitId) {
        self.gate(Op::AllocZero, &[q]);
    }

    pub fn release(&mut self, q: QubitId) {
        self.gate(Op::Release, &[q]);
    }

    pub fn measure_z(&mut self, q: QubitId) -> ClassBit {
        let c = self.fresh_bit();
        self.gate(Op::MeasureZ(c), &[q]);
        c
    }

    pub fn measure_x(&mut self, q: QubitId) -> ClassBit {
        let c = self.fresh_bit();
        self.gate(Op::MeasureX(c), &[q]);
        c
    }

    /// Appends a classically conditioned gate.
    pub fn conditioned(&mut self, bit: ClassBit, op: Op, qubits: &[QubitId]) {
        self.push(Instruction::new(op, qubits.to_vec()).conditioned(bit));
    }

    pub fn begin_gadget(&mut self, tag: GadgetTag) {
        assert!(self.open_span.is_none(), "gadget spans do not nest");
        self.open_span = Some((self.instructions.len(), tag));
    }

    pub fn end_gadget(&mut self) {
        let (start, tag) = self.open_span.take().expect("no open gadget span");
        let end = self.instructions.len();
        if end > start {
            self.spans.push(GadgetSpan { start, end, tag });
        }
    }

    /// Runs `body` inside a gadget span.
    pub fn gadget<R>(&mut self, tag: GadgetTag, body: impl FnOnce(&mut Self) -> R) -> R {
        self.begin_gadget(tag);
        let r = body(self);
        self.end_gadget();
        r
    }

    /// Appends every instruction and span of `other`, which must share this
    /// builder's identifier space.
    pub fn append(&mut self, other: &Circuit) {
        let offset = self.instructions.len();
        self.instructions.extend(other.instructions.iter().cloned());
        self.spans.extend(other.gadget_spans.iter().map(|s| GadgetSpan {
            start: s.start + offset,
            end: s.end + offset,
            tag: s.tag,
        }));
        self.reserve(other.qubit_count, other.classbit_count);
    }

    /// Like [`CircuitBuilder::append`], but renumbers `other`'s classical
    /// bits so they do not collide with bits already used here.
    pub fn append_with_fresh_bits(&mut self, other: &Circuit) {
        let offset = self.next_bit;
        let mut shifted = other.clone();
        for ins in &mut shifted.instructions {
            if let Op::MeasureZ(b) | Op::MeasureX(b) = &mut ins.op {
                b.0 += offset;
            }
            if let Some(b) = &mut ins.condition {
                b.0 += offset;
            }
        }
        self.next_bit += other.classbit_count as u32;
        self.append(&shifted);
    }

    /// Builds without validating.
    pub fn finish_unchecked(mut self) -> Circuit {
        assert!(self.open_span.is_none(), "unterminated gadget span");
        self.spans.sort_by_key(|s| s.start);
        let mut qubit_count = self.next_qubit as usize;
        let mut classbit_count = self.next_bit as usize;
        for ins in &self.instructions {
            for q in &ins.qubits {
                qubit_count = qubit_count.max(q.index() + 1);
            }
            for c in ins.op.result().into_iter().chain(ins.condition) {
                classbit_count = classbit_count.max(c.index() + 1);
            }
        }
        Circuit {
            instructions: self.instructions,
            qubit_count,
            classbit_count,
            gadget_spans: self.spans,
            inputs: self.inputs,
            outputs: self.outputs,
        }
    }

    pub fn finish(self) -> Result<Circuit, ValidationError> {
        let c = self.finish_unchecked();
        validate(&c)?;
        Ok(c)
    }
}
