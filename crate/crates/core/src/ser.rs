//! Serialization helpers.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub(crate) fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}
