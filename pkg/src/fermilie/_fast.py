"""Kernel selection: compiled extension when built, pure Python otherwise."""

from . import _pure

try:
    from . import _kernel as _impl

    USING_KERNEL = True
except ImportError:  # pragma: no cover - depends on build environment
    _impl = _pure
    USING_KERNEL = False

maj_sign = _impl.maj_sign
maj_mul = _impl.maj_mul
maj_bracket = _impl.maj_bracket
pauli_phase = _impl.pauli_phase
pauli_mul = _impl.pauli_mul
pauli_bracket = _impl.pauli_bracket
jw_raw = _impl.jw_raw
maj_shift = _impl.maj_shift
pauli_shift = _impl.pauli_shift
bracket_expand_maj = _impl.bracket_expand_maj
bracket_expand_pauli = _impl.bracket_expand_pauli
