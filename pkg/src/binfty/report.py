"""Check reports shared by every verifier, with deterministic renderings."""

from fractions import Fraction

SCHEMA_VERSION = 1
MAX_WITNESSES = 3


def render_label(x):
    if isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        if len(x) == 2 and isinstance(x[0], tuple) and not isinstance(x[1], tuple):
            # an elementary cochain (inputs, output)
            return "[" + ",".join(render_label(y) for y in x[0]) + "->" + render_label(x[1]) + "]"
        return "(" + ",".join(render_label(y) for y in x) + ")"
    return str(x)


def render_vector(vec):
    if not vec:
        return "0"
    terms = sorted((render_label(k), v) for k, v in vec.items())
    out = []
    for k, v in terms:
        coeff = "" if v == 1 else "-" if v == -1 else f"{v}*"
        out.append(f"{coeff}{k}")
    return " + ".join(out).replace("+ -", "- ")


class Check:
    """Outcome of one identity evaluated over a set of probes."""

    def __init__(self, name, tag, modulus=None):
        self.name = name
        self.tag = tag
        self.modulus = modulus
        self.passed = 0
        self.failed = 0
        self.skipped = 0
        self.witnesses = []
        self.notes = []

    def record(self, ok, probe=None, lhs=None, rhs=None):
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if len(self.witnesses) < MAX_WITNESSES:
            diff = dict(lhs or {})
            for k, v in (rhs or {}).items():
                diff[k] = diff.get(k, 0) - v
                if not diff[k]:
                    del diff[k]
            self.witnesses.append({
                "probe": render_label(probe) if probe is not None else "",
                "lhs": render_vector(lhs or {}),
                "rhs": render_vector(rhs or {}),
                "difference": render_vector(diff),
            })

    def skip(self, probe=None):
        self.skipped += 1

    def fail_with(self, message):
        self.failed += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"message": message})

    def note(self, text):
        self.notes.append(text)

    @property
    def status(self):
        if self.failed:
            return "fail"
        return "pass" if self.passed else "empty"

    @property
    def ok(self):
        return self.status == "pass"

    def to_machine(self):
        d = {
            "name": self.name,
            "equation": self.tag,
            "status": self.status,
            "passed": self.passed,
            "failed": self.failed,
            "skipped_unsafe": self.skipped,
            "witnesses": self.witnesses,
        }
        if self.modulus:
            d["modulus"] = self.modulus
        if self.notes:
            d["notes"] = self.notes
        return d

    def render(self):
        line = (f"[{self.status.upper()}] {self.name} <{self.tag}> "
                f"passed={self.passed} failed={self.failed} skipped={self.skipped}")
        if self.modulus:
            line += f" modulo {self.modulus}"
        lines = [line]
        for n in self.notes:
            lines.append(f"    note: {n}")
        for w in self.witnesses:
            lines.append("    witness:")
            for k, v in w.items():
                lines.append(f"      {k}: {v}")
        return "\n".join(lines)


class Report:
    def __init__(self, suite, cutoffs=None, seed=None):
        self.suite = suite
        self.cutoffs = dict(cutoffs or {})
        self.seed = seed
        self.checks = []
        self.data = {}

    def add(self, check):
        self.checks.append(check)
        return check

    def extend(self, other):
        self.checks.extend(other.checks)
        for k, v in other.data.items():
            self.data[k] = v
        return self

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def to_machine(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "cutoffs": self.cutoffs,
            "seed": self.seed,
            "status": "pass" if self.ok else "fail",
            "checks": [c.to_machine() for c in self.checks],
            "data": self.data,
        }

    def render(self):
        cut = " ".join(f"{k}={v}" for k, v in sorted(self.cutoffs.items()))
        head = f"suite {self.suite}  cutoffs: {cut or '-'}  seed: {self.seed}"
        body = [c.render() for c in self.checks]
        for k in sorted(self.data):
            body.append(f"{k}: {self.data[k]}")
        status = "PASS" if self.ok else "FAIL"
        return "\n".join([head] + body + [f"overall: {status}"])
