//! Unbounded register machine, its Gödel numbering and a clocked interpreter.
//!
//! Instructions:
//!
//! | opcode | JSON                                      | effect                                               |
//! |--------|-------------------------------------------|------------------------------------------------------|
//! | 0      | `{"op":"halt"}`                           | stop                                                 |
//! | 1      | `{"op":"inc","reg":r}`                    | `r += 1`, continue                                   |
//! | 2      | `{"op":"decjz","reg":r,"target":t}`       | if `r == 0` jump to `t`, else `r -= 1` and continue  |
//!
//! Input is placed in register 0, all other registers start at 0, and the
//! output is register 0 at halt. Running past the last instruction (or jumping
//! to a target outside the program) halts. Every executed instruction costs one
//! step and so does the implicit halt, so a zero budget never yields a value.
//!
//! Numbering (version [`NUMBERING_VERSION`]):
//!
//! * instruction codes: `halt = 0`, `inc r = 1 + 2r`, `decjz r t = 2 + 2·⟨r,t⟩`;
//! * program codes: `[] = 0`, `i :: rest = 1 + ⟨code(i), code(rest)⟩`.
//!
//! Both maps are bijections, so every natural is a program index. Index 0 is
//! the empty program, which computes the identity.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::pairing::{pair_big, unpair_big};

pub const NUMBERING_VERSION: &str = "urm-cantor-list-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Instr {
    Halt,
    Inc {
        reg: u64,
    },
    #[serde(rename = "decjz")]
    DecJz {
        reg: u64,
        target: u64,
    },
}

impl Instr {
    pub fn opcode(&self) -> u8 {
        match self {
            Instr::Halt => 0,
            Instr::Inc { .. } => 1,
            Instr::DecJz { .. } => 2,
        }
    }

    pub fn code(&self) -> BigUint {
        match *self {
            Instr::Halt => BigUint::zero(),
            Instr::Inc { reg } => BigUint::one() + (BigUint::from(reg) << 1u32),
            Instr::DecJz { reg, target } => {
                let p = pair_big(&BigUint::from(reg), &BigUint::from(target));
                BigUint::from(2u32) + (p << 1u32)
            }
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Halt => write!(f, "halt"),
            Instr::Inc { reg } => write!(f, "inc   r{reg}"),
            Instr::DecJz { reg, target } => write!(f, "decjz r{reg}, @{target}"),
        }
    }
}

/// Decoded instruction with registers that may not fit in a `u64`.
enum RawInstr {
    Halt,
    Inc(BigUint),
    DecJz(BigUint, BigUint),
}

fn decode_instr(c: &BigUint) -> RawInstr {
    if c.is_zero() {
        return RawInstr::Halt;
    }
    let m = c - BigUint::one();
    if !m.bit(0) {
        RawInstr::Inc(m >> 1u32)
    } else {
        let (r, t) = unpair_big(&(m >> 1u32));
        RawInstr::DecJz(r, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Program {
    pub instrs: Vec<Instr>,
}

impl Program {
    pub fn new(instrs: Vec<Instr>) -> Self {
        Program { instrs }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Gödel number of the program.
    pub fn index(&self) -> BigUint {
        let mut code = BigUint::zero();
        for ins in self.instrs.iter().rev() {
            code = BigUint::one() + pair_big(&ins.code(), &code);
        }
        code
    }

    /// Decodes any natural into a program.
    ///
    /// Registers that do not fit in a `u64` are renamed to distinct unused
    /// registers near `u64::MAX`, and oversized jump targets become
    /// `u64::MAX`; neither change affects behaviour. `index(decode(e)) == e`
    /// holds whenever no renaming happened.
    pub fn decode(e: &BigUint) -> Program {
        let mut raw = Vec::new();
        let mut cur = e.clone();
        while !cur.is_zero() {
            let (head, tail) = unpair_big(&(cur - BigUint::one()));
            raw.push(decode_instr(&head));
            cur = tail;
        }
        let mut renamed: Vec<BigUint> = Vec::new();
        let mut reg = |r: BigUint| -> u64 {
            if let Some(v) = r.to_u64() {
                return v;
            }
            let pos = match renamed.iter().position(|x| *x == r) {
                Some(p) => p,
                None => {
                    renamed.push(r);
                    renamed.len() - 1
                }
            };
            u64::MAX - pos as u64
        };
        let instrs = raw
            .into_iter()
            .map(|ri| match ri {
                RawInstr::Halt => Instr::Halt,
                RawInstr::Inc(r) => Instr::Inc { reg: reg(r) },
                RawInstr::DecJz(r, t) => Instr::DecJz {
                    reg: reg(r),
                    target: t.to_u64().unwrap_or(u64::MAX),
                },
            })
            .collect();
        Program { instrs }
    }

    pub fn decode_u64(e: u64) -> Program {
        Program::decode(&BigUint::from(e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("program serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Program, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Human-readable listing, one instruction per line.
    pub fn disassemble(&self) -> String {
        let mut out = String::new();
        if self.instrs.is_empty() {
            out.push_str("; empty program (identity)\n");
        }
        for (pc, ins) in self.instrs.iter().enumerate() {
            out.push_str(&format!("{pc:4}: {ins}\n"));
        }
        out
    }

    pub fn compile(&self) -> Compiled {
        let mut slots: FxHashMap<u64, usize> = FxHashMap::default();
        slots.insert(0, 0);
        let mut slot = |r: u64| -> usize {
            let n = slots.len();
            *slots.entry(r).or_insert(n)
        };
        let len = self.instrs.len() as u64;
        let code = self
            .instrs
            .iter()
            .map(|ins| match *ins {
                Instr::Halt => Op::Halt,
                Instr::Inc { reg } => Op::Inc(slot(reg)),
                Instr::DecJz { reg, target } => Op::DecJz(slot(reg), target.min(len) as usize),
            })
            .collect();
        Compiled {
            code,
            slots: slots.len(),
        }
    }
}

/// Small programs used to realize the built-in rules by index.
pub mod library {
    use super::{Instr, Program};

    const ZERO: u64 = 9;

    fn jump(target: u64) -> Instr {
        Instr::DecJz { reg: ZERO, target }
    }

    pub fn identity() -> Program {
        Program::new(vec![])
    }

    pub fn successor() -> Program {
        Program::new(vec![Instr::Inc { reg: 0 }])
    }

    /// `n ↦ n + k`.
    pub fn add_const(k: u64) -> Program {
        Program::new((0..k).map(|_| Instr::Inc { reg: 0 }).collect())
    }

    /// `n ↦ k·n + c` for `k ≥ 1`.
    pub fn affine(k: u64, c: u64) -> Program {
        let k = k.max(1);
        // loop: move r0 into r1 k times over, then move r1 back and add c.
        let mut v = vec![Instr::DecJz {
            reg: 0,
            target: k + 2,
        }];
        for _ in 0..k {
            v.push(Instr::Inc { reg: 1 });
        }
        v.push(jump(0));
        let back = v.len() as u64;
        v.push(Instr::DecJz {
            reg: 1,
            target: back + 3,
        });
        v.push(Instr::Inc { reg: 0 });
        v.push(jump(back));
        for _ in 0..c {
            v.push(Instr::Inc { reg: 0 });
        }
        Program::new(v)
    }

    /// Constant `c`: clear r0, then increment `c` times.
    pub fn constant(c: u64) -> Program {
        let mut v = vec![Instr::DecJz { reg: 0, target: 2 }, jump(0)];
        for _ in 0..c {
            v.push(Instr::Inc { reg: 0 });
        }
        Program::new(v)
    }

    /// Truncated predecessor `n ↦ n ∸ 1`.
    pub fn predecessor() -> Program {
        Program::new(vec![Instr::DecJz { reg: 0, target: 1 }])
    }

    /// Unconditional loop.
    pub fn diverge() -> Program {
        Program::new(vec![jump(0)])
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Halt,
    Inc(usize),
    DecJz(usize, usize),
}

/// A program with registers compacted to dense slots.
#[derive(Clone, Debug)]
pub struct Compiled {
    code: Vec<Op>,
    slots: usize,
}

impl Compiled {
    pub fn start(&self, input: u64) -> Machine {
        let mut regs = vec![0u64; self.slots];
        regs[0] = input;
        Machine {
            pc: 0,
            regs,
            steps: 0,
            result: None,
        }
    }

    /// Runs from scratch with the given budget.
    pub fn run(&self, input: u64, budget: u64) -> Option<u64> {
        let mut m = self.start(input);
        m.advance(self, budget);
        m.result
    }
}

/// Resumable machine state; advancing to a larger budget continues where the
/// previous run stopped.
#[derive(Clone, Debug)]
pub struct Machine {
    pc: usize,
    regs: Vec<u64>,
    steps: u64,
    result: Option<u64>,
}

impl Machine {
    pub fn result(&self) -> Option<u64> {
        self.result
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Executes until halting or until `budget` steps have been spent in total.
    pub fn advance(&mut self, prog: &Compiled, budget: u64) -> Option<u64> {
        while self.result.is_none() && self.steps < budget {
            self.steps += 1;
            match prog.code.get(self.pc) {
                None | Some(Op::Halt) => self.result = Some(self.regs[0]),
                Some(&Op::Inc(r)) => {
                    self.regs[r] = self.regs[r].saturating_add(1);
                    self.pc += 1;
                }
                Some(&Op::DecJz(r, t)) => {
                    if self.regs[r] == 0 {
                        self.pc = t;
                    } else {
                        self.regs[r] -= 1;
                        self.pc += 1;
                    }
                }
            }
        }
        self.result
    }
}
