"""Result tables serialised as round-trip-exact CSV.

Floats are written with 17 significant digits and a '.' separator, so
parsing the file back reproduces every value bit for bit regardless of
locale.  Rows keep their construction order; files use LF endings.
"""

from dataclasses import dataclass, field

from ._io import atomic_write_text


def format_cell(value) -> str:
    """Canonical text for one cell; booleans before ints, they overlap."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        if any(ch in value for ch in ",\n\r\""):
            raise ValueError(f"cell text may not contain separators, got {value!r}")
        return value
    raise TypeError(f"unsupported cell type {type(value).__name__}")


@dataclass
class ResultTable:
    """Ordered columns plus rows of float/int/bool/str cells."""

    columns: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.columns = tuple(str(c) for c in self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row of length {len(row)} does not match {len(self.columns)} columns"
                )

    def append(self, *cells):
        if len(cells) != len(self.columns):
            raise ValueError(
                f"row of length {len(cells)} does not match {len(self.columns)} columns"
            )
        self.rows.append(tuple(cells))

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines.extend(",".join(format_cell(cell) for cell in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def write_csv(table: ResultTable, path):
    return atomic_write_text(path, table.to_csv())


def read_csv(path) -> ResultTable:
    """Read a table back with every cell as raw text."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError(f"{path}: empty table")
    columns = tuple(lines[0].split(","))
    rows = [tuple(line.split(",")) for line in lines[1:]]
    return ResultTable(columns=columns, rows=rows)
