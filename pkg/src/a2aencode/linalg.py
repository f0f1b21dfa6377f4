"""Dense matrices over a prime field, with the constructions used by the
encode protocols: Vandermonde and DFT matrices, Lagrange basis matrices,
Gauss-Jordan inversion, the row-vector product that serves as the protocol
verification oracle, and a portable deterministic PRNG for test inputs.

All entries are stored as canonical residues; arithmetic is exact.
"""

from __future__ import annotations

from typing import IO, Iterable, Sequence

from .gf import Fe, FieldMismatch, PrimeField


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class SingularMatrix(ValueError):
    """Matrix has no inverse over its field."""


class DuplicatePoints(ValueError):
    """Evaluation points were required to be pairwise distinct."""


class OutOfRange(ValueError):
    """Index does not fit in the requested digit width."""


class MatrixFq(object):
    """Immutable dense matrix over F_q, stored row-major as residues."""

    __slots__ = ("field", "rows", "cols", "_e")

    def __init__(self, field: PrimeField, rows: int, cols: int, entries: Iterable):
        if rows < 0 or cols < 0:
            raise DimensionError("negative dimensions")
        q = field.q
        flat = []
        for v in entries:
            if isinstance(v, Fe):
                if v.field.q != q:
                    raise FieldMismatch(f"entry from F_{v.field.q} in F_{q} matrix")
                flat.append(v.value)
            else:
                flat.append(int(v) % q)
        if len(flat) != rows * cols:
            raise DimensionError(
                f"expected {rows * cols} entries for {rows}x{cols}, got {len(flat)}"
            )
        self.field = field
        self.rows = rows
        self.cols = cols
        self._e = tuple(flat)

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence]) -> "MatrixFq":
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(field, len(rows), ncols, (v for r in rows for v in r))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "MatrixFq":
        return cls(field, n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "MatrixFq":
        return cls(field, rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij) -> Fe:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return Fe(self._e[i * self.cols + j], self.field)

    def row_values(self, i: int) -> tuple[int, ...]:
        """Raw residues of row i."""
        return self._e[i * self.cols : (i + 1) * self.cols]

    def column_values(self, j: int) -> tuple[int, ...]:
        """Raw residues of column j."""
        return self._e[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row_values(i)) for i in range(self.rows)]

    def __eq__(self, other):
        if isinstance(other, MatrixFq):
            return (
                self.field.q == other.field.q
                and self.rows == other.rows
                and self.cols == other.cols
                and self._e == other._e
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.rows, self.cols, self._e))

    def __repr__(self):
        return f"MatrixFq(q={self.field.q}, {self.rows}x{self.cols})"


def _common_field(xs: Sequence[Fe]) -> PrimeField:
    field = xs[0].field
    for x in xs:
        if x.field.q != field.q:
            raise FieldMismatch("vector mixes fields")
    return field


def mat_vec_mul(x: Sequence[Fe], a: MatrixFq) -> list[Fe]:
    """Row vector times matrix; the verification oracle for every protocol."""
    if len(x) != a.rows:
        raise DimensionError(f"vector length {len(x)} != matrix rows {a.rows}")
    if x and _common_field(x).q != a.field.q:
        raise FieldMismatch("vector and matrix fields differ")
    q = a.field.q
    vals = [e.value for e in x]
    out = []
    for j in range(a.cols):
        col = a.column_values(j)
        out.append(Fe(sum(v * c for v, c in zip(vals, col)) % q, a.field))
    return out


def matmul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    if a.cols != b.rows:
        raise DimensionError(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    if a.field.q != b.field.q:
        raise FieldMismatch("matrix fields differ")
    q = a.field.q
    bcols = [b.column_values(j) for j in range(b.cols)]
    flat = []
    for i in range(a.rows):
        row = a.row_values(i)
        for col in bcols:
            flat.append(sum(x * y for x, y in zip(row, col)) % q)
    return MatrixFq(a.field, a.rows, b.cols, flat)


def invert(a: MatrixFq) -> MatrixFq:
    """Inverse via Gauss-Jordan elimination; pivot is the first nonzero entry
    in column order (arithmetic is exact, so no numerical pivoting).
    """
    if a.rows != a.cols:
        raise DimensionError("only square matrices are invertible")
    n = a.rows
    q = a.field.q
    left = [list(a.row_values(i)) for i in range(n)]
    right = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if left[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"no pivot in column {col}")
        if piv != col:
            left[col], left[piv] = left[piv], left[col]
            right[col], right[piv] = right[piv], right[col]
        inv_p = pow(left[col][col], -1, q)
        left[col] = [v * inv_p % q for v in left[col]]
        right[col] = [v * inv_p % q for v in right[col]]
        for r in range(n):
            if r == col or left[r][col] == 0:
                continue
            f = left[r][col]
            left[r] = [(v - f * w) % q for v, w in zip(left[r], left[col])]
            right[r] = [(v - f * w) % q for v, w in zip(right[r], right[col])]
    return MatrixFq(a.field, n, n, (v for row in right for v in row))


def vandermonde(points: Sequence[Fe]) -> MatrixFq:
    """Square matrix with entry (i, j) = points[j]**i."""
    field = _common_field(points)
    q = field.q
    vals = [p.value for p in points]
    if len(set(vals)) != len(vals):
        raise DuplicatePoints("evaluation points must be pairwise distinct")
    n = len(vals)
    flat = []
    row = [1] * n
    for _ in range(n):
        flat.extend(row)
        row = [r * v % q for r, v in zip(row, vals)]
    return MatrixFq(field, n, n, flat)


def dft_matrix(field: PrimeField, k: int) -> MatrixFq:
    """K x K matrix with entry (i, j) = r**(i*j) for r a primitive K-th root
    of unity; a Vandermonde matrix on the points r**j.
    """
    root = field.root_of_unity(k).value
    q = field.q
    return MatrixFq(field, k, k, (pow(root, i * j, q) for i in range(k) for j in range(k)))


def lagrange_matrix(omega: Sequence[Fe], alpha: Sequence[Fe]) -> MatrixFq:
    """Matrix of Lagrange basis evaluations: entry (i, j) is the i-th basis
    polynomial over the nodes ``omega`` evaluated at ``alpha[j]``.

    Computed directly from the product formula, keeping it independent of
    the inverse-Vandermonde construction it provably equals.
    """
    field = _common_field(list(omega) + list(alpha))
    q = field.q
    if len(omega) != len(alpha):
        raise DimensionError("node and evaluation point counts differ")
    w = [e.value for e in omega]
    av = [e.value for e in alpha]
    if len(set(w)) != len(w):
        raise DuplicatePoints("interpolation nodes must be pairwise distinct")
    n = len(w)
    flat = []
    for i in range(n):
        denom = 1
        for l in range(n):
            if l != i:
                denom = denom * (w[i] - w[l]) % q
        denom_inv = pow(denom, -1, q)
        for j in range(n):
            num = 1
            for l in range(n):
                if l != i:
                    num = num * (av[j] - w[l]) % q
            flat.append(num * denom_inv % q)
    return MatrixFq(field, n, n, flat)


def digit_reverse(k: int, width: int, base: int) -> int:
    """Reverse the ``width`` base-``base`` digits of k; an involution."""
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    if not 0 <= k < base**width:
        raise OutOfRange(f"{k} does not fit in {width} base-{base} digits")
    out = 0
    for _ in range(width):
        k, d = divmod(k, base)
        out = out * base + d
    return out


def digit_reversal_permutation(n: int, base: int) -> tuple[int, ...]:
    """The permutation i -> digit_reverse(i) on [0, n) for n a power of base."""
    width = 0
    while base**width < n:
        width += 1
    if base**width != n:
        raise OutOfRange(f"{n} is not a power of {base}")
    return tuple(digit_reverse(i, width, base) for i in range(n))


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream (standard constants); reduced mod q by rejection
    sampling, so draws are bias-free and reproducible across platforms.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        limit = ((1 << 64) // n) * n
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


def random_matrix(field: PrimeField, rows: int, cols: int, seed: int) -> MatrixFq:
    """Matrix of pseudo-random residues, fully determined by the seed."""
    rng = SplitMix64(seed)
    return MatrixFq(field, rows, cols, (rng.below(field.q) for _ in range(rows * cols)))


def random_vector(field: PrimeField, n: int, seed: int) -> list[Fe]:
    rng = SplitMix64(seed)
    return [Fe(rng.below(field.q), field) for _ in range(n)]


def vector(field: PrimeField, values: Iterable[int]) -> list[Fe]:
    """Wrap plain integers as canonical field elements."""
    return [Fe(v, field) for v in values]


def format_matrix(a: MatrixFq) -> str:
    """Serialize as ``q rows cols`` then one line of residues per row,
    space-separated, newline-terminated, no trailing whitespace.
    """
    lines = [f"{a.field.q} {a.rows} {a.cols}"]
    for i in range(a.rows):
        lines.append(" ".join(str(v) for v in a.row_values(i)))
    return "\n".join(lines) + "\n"


def write_matrix(a: MatrixFq, f: IO[str]) -> None:
    f.write(format_matrix(a))


def parse_matrix(text: str, field: PrimeField | None = None) -> MatrixFq:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("header must be 'q rows cols'")
    q, rows, cols = (int(v) for v in head)
    if field is None:
        field = PrimeField(q)
    elif field.q != q:
        raise FieldMismatch(f"file declares q={q}, expected q={field.q}")
    if len(lines) != rows + 1:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    flat = []
    for ln in lines[1:]:
        vals = [int(v) for v in ln.split()]
        if len(vals) != cols:
            raise ValueError(f"row has {len(vals)} entries, expected {cols}")
        if any(not 0 <= v < q for v in vals):
            raise ValueError("entries must be canonical residues in [0, q)")
        flat.extend(vals)
    return MatrixFq(field, rows, cols, flat)


def read_matrix(f: IO[str], field: PrimeField | None = None) -> MatrixFq:
    return parse_matrix(f.read(), field)
