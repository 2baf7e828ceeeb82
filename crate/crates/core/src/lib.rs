//! Exact symbolic current algebra on the cotangent bundle of the bosonic and
//! super loop space.

pub mod cd;
pub mod expr;
pub mod loopspace;
pub mod tensor;
