"""Bundled MAC programs used by the differential checks.

``UNARY`` programs avoid ``mem`` so they can run as UNIV guests.  ``PAIRED``
programs read their input as pair(x, y), which is what the s-m-n law talks
about.  ``MEMORY`` programs exercise heap access in the compiler.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Callable

from .encoding import encode_program, pair
from .maclang import compile_mac


@dataclass(frozen=True)
class CorpusProgram:
    name: str
    source: str
    sample: Callable[[random.Random], int]
    budget: int = 10**5

    @functools.cached_property
    def index(self) -> int:
        return encode_program(compile_mac(self.source).instructions)


def _below(n):
    return lambda rng: rng.randrange(n)


def _bits(n):
    return lambda rng: rng.getrandbits(rng.randint(1, n))


def _paired(nx, ny):
    return lambda rng: pair(rng.randrange(nx), rng.randrange(ny))


UNARY = [
    CorpusProgram("identity", "output = input", _bits(200)),
    CorpusProgram("successor", "output = input + 1", _bits(200)),
    CorpusProgram("double", "output = input * 2", _bits(200)),
    CorpusProgram("square", "output = input * input", _bits(200)),
    CorpusProgram("predecessor", "output = input - 1", _below(5)),
    CorpusProgram("const42", "output = 42", _bits(64)),
    CorpusProgram("parity", "output = input % 2", _bits(100)),
    CorpusProgram("triangular", """
var k
k = input
while k != 0
  output = output + k
  k = k - 1
end
""", _below(200)),
    CorpusProgram("factorial", """
var k
output = 1
k = input
while k > 1
  output = output * k
  k = k - 1
end
""", _below(40)),
    CorpusProgram("fibonacci", """
var a, b, t, k
a = 0
b = 1
k = input
while k != 0
  t = a + b
  a = b
  b = t
  k = k - 1
end
output = a
""", _below(100)),
    CorpusProgram("digit_sum", """
var n
n = input
while n != 0
  output = output + n % 10
  n = n / 10
end
""", _bits(64)),
    CorpusProgram("ilog2", """
var n
n = input / 2
while n != 0
  output = output + 1
  n = n / 2
end
""", _bits(300)),
    CorpusProgram("isqrt_linear", """
var r
r = 0
while (r + 1) * (r + 1) <= input
  r = r + 1
end
output = r
""", _below(5000)),
    CorpusProgram("popcount", """
var n
n = input
while n != 0
  output = output + n % 2
  n = n / 2
end
""", _bits(200)),
    CorpusProgram("reverse_digits", """
var n
n = input
while n != 0
  output = output * 10 + n % 10
  n = n / 10
end
""", _bits(60)),
    CorpusProgram("collatz_steps", """
var n
n = input + 1
while n != 1
  if n % 2 == 0 then
    n = n / 2
  else
    n = 3 * n + 1
  end
  output = output + 1
end
""", _below(1000)),
    CorpusProgram("gcd_of_pair", """
var a, b, t
unpair(a, b, input)
while b != 0
  t = a % b
  a = b
  b = t
end
output = a
""", _paired(10**6, 10**6)),
    CorpusProgram("pair_sum", """
var a, b
unpair(a, b, input)
output = a + b
""", _bits(400)),
    CorpusProgram("self_pair", "pair(output, input, input)", _bits(100)),
    CorpusProgram("power_of_two", """
var k
output = 1
k = input
while k != 0
  output = output * 2
  k = k - 1
end
""", _below(300)),
    CorpusProgram("is_prime", """
var d, n
n = input
output = 0
if n >= 2 then
  output = 1
  d = 2
  while d * d <= n
    if n % d == 0 then
      output = 0
      d = n
    end
    d = d + 1
  end
end
""", _below(3000)),
    CorpusProgram("max_digit", """
var n, d
n = input
while n != 0
  d = n % 10
  if d > output then
    output = d
  end
  n = n / 10
end
""", _bits(80)),
    CorpusProgram("odd_only", """
# loops forever on even inputs
while input % 2 == 0
  input = input + 2
end
output = input
""", _below(100), budget=2000),
]

PAIRED = [
    CorpusProgram("add", "var a, b\nunpair(a, b, input)\noutput = a + b", _paired(10**9, 10**9)),
    CorpusProgram("monus", "var a, b\nunpair(a, b, input)\noutput = a - b", _paired(1000, 1000)),
    CorpusProgram("mul", "var a, b\nunpair(a, b, input)\noutput = a * b", _paired(10**9, 10**9)),
    CorpusProgram("max", """
var a, b
unpair(a, b, input)
output = a
if b > a then
  output = b
end
""", _paired(1000, 1000)),
    CorpusProgram("min", """
var a, b
unpair(a, b, input)
output = a
if b < a then
  output = b
end
""", _paired(1000, 1000)),
    CorpusProgram("gcd", """
var a, b, t
unpair(a, b, input)
while b != 0
  t = a % b
  a = b
  b = t
end
output = a
""", _paired(10**6, 10**6)),
    CorpusProgram("power", """
var a, b
unpair(a, b, input)
output = 1
while b != 0
  output = output * a
  b = b - 1
end
""", _paired(100, 30)),
    CorpusProgram("div", "var a, b\nunpair(a, b, input)\noutput = a / b", _paired(10**6, 100)),
    CorpusProgram("mod", "var a, b\nunpair(a, b, input)\noutput = a % b", _paired(10**6, 100)),
    CorpusProgram("equal", """
var a, b
unpair(a, b, input)
output = 0
if a == b then
  output = 1
end
""", _paired(5, 5)),
    CorpusProgram("swap", "var a, b\nunpair(a, b, input)\npair(output, b, a)", _paired(10**6, 10**6)),
    CorpusProgram("first", "var a, b\nunpair(a, b, input)\noutput = a", _paired(10**6, 10**6)),
    CorpusProgram("second", "var a, b\nunpair(a, b, input)\noutput = b", _paired(10**6, 10**6)),
    CorpusProgram("range_sum", """
var a, b
unpair(a, b, input)
b = a + b % 50
while a <= b
  output = output + a
  a = a + 1
end
""", _paired(1000, 1000)),
    CorpusProgram("wait_for_zero", """
# diverges unless the second component is 0
var a, b
unpair(a, b, input)
if b != 0 then
  diverge
end
output = a
""", _paired(100, 3), budget=5000),
]

MEMORY = [
    CorpusProgram("prime_count", """
var n, i, j, count
n = input
i = 2
while i <= n
  if mem[i] == 0 then
    count = count + 1
    j = i * i
    while j <= n
      mem[j] = 1
      j = j + i
    end
  end
  i = i + 1
end
output = count
""", _below(300), budget=10**6),
    CorpusProgram("digit_array_reverse", """
# store decimal digits, read them back in reverse order
var n, k, i
n = input
while n != 0
  mem[k] = n % 10
  n = n / 10
  k = k + 1
end
i = 0
while i < k
  output = output * 10 + mem[i]
  i = i + 1
end
""", _bits(60)),
    CorpusProgram("digit_histogram_mode", """
var n, d, best, i
n = input
while n != 0
  d = n % 10
  mem[d] = mem[d] + 1
  n = n / 10
end
i = 0
while i < 10
  if mem[i] > best then
    best = mem[i]
    output = i
  end
  i = i + 1
end
""", _bits(120)),
    CorpusProgram("prefix_sums", """
var k, n
n = input % 40
k = 1
while k <= n
  mem[k] = mem[k - 1] + k * k
  k = k + 1
end
output = mem[n]
""", _below(10**4)),
]


def all_programs() -> list[CorpusProgram]:
    return UNARY + PAIRED + MEMORY


def univ_corpus(n_inputs: int = 50, seed: int = 0) -> list[tuple[int, int, int]]:
    """(index, input, budget) triples over the unary corpus."""
    rng = random.Random(seed)
    return [(p.index, p.sample(rng), p.budget) for p in UNARY for _ in range(n_inputs)]
