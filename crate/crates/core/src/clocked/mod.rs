//! Clocked computability substrate: pairing, a register-machine interpreter
//! providing the enumeration `(φ_e)`, clocked functions and c.e. sets.

pub mod ce;
pub mod function;
pub mod machine;
pub mod numbering;
pub mod pairing;

pub use ce::CeSet;
pub use function::{ClockedFunction, Descriptor, Eval};
pub use machine::{library, Instr, Program, NUMBERING_VERSION};
pub use numbering::{Numbering, PhiCache};
pub use pairing::{checked_pair, left, pair, right, unpair};

/// `φ_{e,s}(n)` for the register-machine numbering.
pub fn interpret(e: &num_bigint::BigUint, n: u64, budget: u64) -> Eval {
    Program::decode(e).compile().run(n, budget).into()
}

pub fn eval_clocked(f: &ClockedFunction, n: u64, budget: u64) -> Eval {
    f.eval(n, budget)
}
