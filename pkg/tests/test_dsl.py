"""
論理回路DSLパーサーのテスト
"""

import glob
import os

import pytest

from services.quantum.circuits import ghz_logical
from services.quantum.dsl import parse_dsl, render_dsl
from services.quantum.ir import U3, LogicalCircuit, PhysicalCircuit, PhysicalGate, parse_physical
from services.quantum.logical import lower
from services.quantum.code import make_code
from utils.errors import ParseError

DSL_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'dsl')
PROGRAMS = sorted(glob.glob(os.path.join(DSL_DIR, '*.qc')))


def read(path):
    with open(path, encoding='utf-8') as f:
        return f.read()


def test_golden_programs_present():
    assert len(PROGRAMS) == 20


@pytest.mark.parametrize('path', PROGRAMS, ids=lambda p: os.path.basename(p))
def test_golden_render(path):
    circuit = parse_dsl(read(path))
    assert render_dsl(circuit) == read(path[:-3] + '.golden')


@pytest.mark.parametrize('path', PROGRAMS, ids=lambda p: os.path.basename(p))
def test_round_trip(path):
    circuit = parse_dsl(read(path))
    assert parse_dsl(render_dsl(circuit)) == circuit


def test_ghz2_program():
    assert parse_dsl('qubits 2\nh q0\ncx q0 q1') == ghz_logical(2)


def test_single_u3():
    circuit = parse_dsl('qubits 1\nu3 3.14159 0 3.14159 q0')
    assert circuit.N == 1
    assert circuit.gates[0].kind == U3
    assert circuit.gates[0].params == (3.14159, 0.0, 3.14159)


@pytest.mark.parametrize('text,line,column,fragment', [
    ('qubits 2\ncx q0 q5', 2, 7, 'index out of range'),
    ('qubits 2\nfoo q0', 2, 1, 'foo'),
    ('qubits 2\nh q0 q1', 2, 1, None),
    ('qubits 1\nu3 0 0 q0', 2, 1, None),
    ('h q0', 1, 1, None),
    ('', 1, 1, None),
    ('# only a comment\n', 1, 1, None),
    ('qubits 2\nqubits 3', 2, 1, None),
    ('qubits 0', 1, 1, None),
    ('qubits two', 1, 1, None),
    ('qubits ²', 1, 1, None),
    ('qubits 2\nx q٣', 2, 3, None),
    ('qubits 1\nu3 a 0 0 q0', 2, 4, None),
    ('qubits 1\nu3 inf 0 0 q0', 2, 4, None),
    ('qubits 2\ncx q1 q1', 2, 7, None),
    ('qubits 2\nh 0', 2, 3, None),
    ('qubits 2\n\n  x   q9', 3, 7, 'index out of range'),
])
def test_malformed_input_is_located(text, line, column, fragment):
    with pytest.raises(ParseError) as excinfo:
        parse_dsl(text)
    assert excinfo.value.line == line
    assert excinfo.value.column == column
    assert f'line {line}' in str(excinfo.value)
    if fragment:
        assert fragment in str(excinfo.value)


class TestPhysicalText:
    def test_round_trip_lowered_circuit(self, code_q2_s1):
        circuit = lower(ghz_logical(3), code_q2_s1)
        assert parse_physical(circuit.render()) == circuit

    def test_injected_gate_label(self):
        circuit = PhysicalCircuit(1, [PhysicalGate.unitary([[1, 0], [0, -1]], 0, 'Z')])
        parsed = parse_physical(circuit.render())
        assert parsed.gates[0].render() == 'u Z q0'

    def test_bad_line(self):
        with pytest.raises(ParseError) as excinfo:
            parse_physical('qubits 2\nswap q0 q1\n')
        assert excinfo.value.line == 2

    def test_index_out_of_range(self):
        with pytest.raises(ParseError):
            parse_physical('qubits 2\nx q2\n')

    @pytest.mark.parametrize('header', ['qubits ³', 'qubits 3.0', 'qubits -1'])
    def test_non_ascii_or_signed_header(self, header):
        """数字以外（上付き数字など）の qubits ヘッダは位置付きの ParseError になる"""
        with pytest.raises(ParseError) as excinfo:
            parse_physical(f'{header}\nx q0\n')
        assert (excinfo.value.line, excinfo.value.column) == (1, 1)

    def test_logical_circuit_equality(self):
        assert LogicalCircuit(2, []) == parse_dsl('qubits 2')
