# Creation date: 18 Oct 2026
# Description: exact representation, loading and validation of Kochen-Specker
#   sets whose vector entries are Eisenstein integers a + b*w, w = exp(2*pi*i/3).
"""Exact layer of the toolkit.

A KS-set file is a single JSON document:

  { "dimension": 6, "profile": "ks21",
    "vectors": [ { "id": 1, "entries": [[a, b], ...] }, ... ],
    "contexts": [ [id, id, id, id, id, id], ... ] }

where the pair [a, b] stands for a + b*w. Every structural check (orthogonality,
context coverage) is done in Z[w] with Python integers; floating point only
appears in `to_unit_vector` and downstream.
"""

import collections
import hashlib
import json
import logging
import os

import numpy as np

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

KS21_PROFILE = 'ks21'
GENERIC_PROFILE = 'generic'
KS21_NUM_VECTORS = 21
KS21_NUM_CONTEXTS = 7
KS21_DIMENSION = 6
KS21_CONTEXTS_PER_VECTOR = 2

# Components beyond this bound cannot come from a hand-written KS set.
MAX_COMPONENT = 2 ** 31

OMEGA = complex(-0.5, np.sqrt(3) / 2)


def _HERE(*args):
  h = os.path.dirname(os.path.realpath(__file__))
  return os.path.abspath(os.path.join(h, *args))

DEFAULT_KS21_PATH = _HERE('..', 'ks_format', 'ks21.json')


class KsFormatError(ValueError):
  """The source does not parse against the KS-set file schema."""


class KsInvariantError(ValueError):
  """A parsed set violates a structural invariant.

  `context` is the 1-based index of the offending context (or None) and `pair`
  the first pair of vector ids that triggered the failure (or None).
  """

  def __init__(self, message, context=None, pair=None):
    super(KsInvariantError, self).__init__(message)
    self.context = context
    self.pair = pair


class EisensteinOverflowError(OverflowError):
  pass


def _check_component(x):
  if abs(x) > MAX_COMPONENT:
    raise EisensteinOverflowError(
        "Eisenstein component {} exceeds the bound {}; the input is "
        "probably corrupt.".format(x, MAX_COMPONENT))
  return x


class EisensteinInt(collections.namedtuple('EisensteinInt', ['a', 'b'])):
  """The Eisenstein integer a + b*w with w**2 = -1 - w."""
  __slots__ = ()

  def __new__(cls, a=0, b=0):
    if isinstance(a, bool) or isinstance(b, bool) or \
        not isinstance(a, (int, np.integer)) or \
        not isinstance(b, (int, np.integer)):
      raise TypeError("Eisenstein components must be integers, got ({!r}, {!r})"
                      .format(a, b))
    return super(EisensteinInt, cls).__new__(
        cls, _check_component(int(a)), _check_component(int(b)))

  def __add__(self, other):
    return EisensteinInt(self.a + other.a, self.b + other.b)

  def __sub__(self, other):
    return EisensteinInt(self.a - other.a, self.b - other.b)

  def __neg__(self):
    return EisensteinInt(-self.a, -self.b)

  def __mul__(self, other):
    if not isinstance(other, EisensteinInt):
      other = EisensteinInt(other, 0)
    return eisenstein_mul(self, other)

  def __rmul__(self, other):
    # Otherwise `3 * x` falls back to tuple repetition.
    return EisensteinInt(other, 0) * self

  def conjugate(self):
    # conj(w) = w**2 = -1 - w
    return EisensteinInt(self.a - self.b, -self.b)

  def norm(self):
    """|a + b*w|**2 = a**2 - a*b + b**2, a nonnegative integer."""
    return self.a * self.a - self.a * self.b + self.b * self.b

  def is_zero(self):
    return self.a == 0 and self.b == 0

  def to_complex(self):
    return self.a + self.b * OMEGA

  def __repr__(self):
    return 'EisensteinInt({}, {})'.format(self.a, self.b)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
W = EisensteinInt(0, 1)


def eisenstein_mul(x, y):
  """Ring product in Z[w].

  (a + b w)(c + d w) = ac + (ad + bc) w + bd w**2 = (ac - bd) + (ad + bc - bd) w

  Raises:
    EisensteinOverflowError: if a component of the product leaves the range
      accepted for KS-set entries.
  """
  a, b = x
  c, d = y
  return EisensteinInt(a * c - b * d, a * d + b * c - b * d)


class KsVector(collections.namedtuple('KsVector', ['id', 'entries'])):
  """A ray of C^d given by d exact entries; `squared_norm` is derived."""
  __slots__ = ()

  def __new__(cls, id, entries):
    entries = tuple(e if isinstance(e, EisensteinInt) else EisensteinInt(*e)
                    for e in entries)
    return super(KsVector, cls).__new__(cls, int(id), entries)

  @property
  def dimension(self):
    return len(self.entries)

  @property
  def squared_norm(self):
    return sum(e.norm() for e in self.entries)

  def scaled(self, k):
    """Return the vector multiplied by the integer (or Eisenstein) scalar k."""
    if not isinstance(k, EisensteinInt):
      k = EisensteinInt(k, 0)
    return KsVector(self.id, [k * e for e in self.entries])

  def to_complex(self):
    return np.array([e.to_complex() for e in self.entries], dtype=complex)


def inner_product_exact(u, v):
  """Return sum_l conj(u_l) * v_l in Z[w], without normalization.

  Raises:
    ValueError: if the two vectors do not live in the same dimension.
  """
  if u.dimension != v.dimension:
    raise ValueError("Dimension mismatch: vector {} has {} entries, vector {} "
                     "has {}.".format(u.id, u.dimension, v.id, v.dimension))
  total = ZERO
  for x, y in zip(u.entries, v.entries):
    total = total + x.conjugate() * y
  return total


def to_unit_vector(v):
  """Bridge to the numeric domain: entries / sqrt(squared_norm)."""
  squared_norm = v.squared_norm
  if squared_norm <= 0:
    raise ValueError("Vector {} is the zero vector and has no direction."
                     .format(v.id))
  return v.to_complex() / np.sqrt(squared_norm)


def projector(v):
  u = to_unit_vector(v)
  return np.outer(u, u.conj())


class KsSet(object):
  """A candidate Kochen-Specker set: vectors of C^d grouped in contexts.

  Instances are validated at construction and never mutated afterwards;
  `delete_vector` returns a new set.
  """

  def __init__(self, dimension, vectors, contexts, profile=GENERIC_PROFILE):
    self._dimension = int(dimension)
    self._vectors = tuple(vectors)
    self._contexts = tuple(tuple(int(i) for i in c) for c in contexts)
    self._profile = profile
    self._by_id = {v.id: v for v in self._vectors}
    self._validate()

  @property
  def dimension(self):
    return self._dimension

  @property
  def vectors(self):
    return self._vectors

  @property
  def contexts(self):
    return self._contexts

  @property
  def profile(self):
    return self._profile

  @property
  def ids(self):
    return [v.id for v in self._vectors]

  def __len__(self):
    return len(self._vectors)

  def vector(self, vector_id):
    try:
      return self._by_id[vector_id]
    except KeyError:
      raise KeyError("No vector with id {} in this set.".format(vector_id))

  def index_of(self, vector_id):
    """Position of a vector id in `vectors` (0-based)."""
    return self.ids.index(vector_id)

  def is_complete(self, context):
    return len(context) == self._dimension

  def _validate(self):
    d = self._dimension
    if d < 1:
      raise KsInvariantError("Dimension must be positive, got {}.".format(d))
    seen = set()
    for v in self._vectors:
      if v.id in seen:
        raise KsInvariantError("Vector id {} is not unique.".format(v.id),
                               pair=(v.id, v.id))
      seen.add(v.id)
      if v.dimension != d:
        raise KsInvariantError(
            "Vector {} has {} entries but the set has dimension {}."
            .format(v.id, v.dimension, d))
      if v.squared_norm <= 0:
        raise KsInvariantError("Vector {} is the zero vector.".format(v.id))

    for c_index, context in enumerate(self._contexts, start=1):
      if len(context) > d:
        raise KsInvariantError(
            "Context {} has {} members, more than the dimension {}."
            .format(c_index, len(context), d), context=c_index)
      if len(set(context)) != len(context):
        duplicate = [i for i in context if context.count(i) > 1][0]
        raise KsInvariantError(
            "Context {} contains vector {} twice.".format(c_index, duplicate),
            context=c_index, pair=(duplicate, duplicate))
      for i in context:
        if i not in self._by_id:
          raise KsInvariantError(
              "Context {} refers to unknown vector id {}.".format(c_index, i),
              context=c_index)
      for pos, i in enumerate(context):
        for j in context[pos + 1:]:
          if not inner_product_exact(self._by_id[i], self._by_id[j]).is_zero():
            raise KsInvariantError(
                "Context {}: vectors {} and {} are not orthogonal."
                .format(c_index, i, j), context=c_index, pair=(i, j))

    if self._profile == KS21_PROFILE:
      self._validate_ks21()
    elif self._profile != GENERIC_PROFILE:
      raise KsInvariantError("Unknown profile {!r}.".format(self._profile))

  def _validate_ks21(self):
    if self._dimension != KS21_DIMENSION:
      raise KsInvariantError("KS21 lives in dimension {}, got {}."
                             .format(KS21_DIMENSION, self._dimension))
    if len(self._vectors) != KS21_NUM_VECTORS:
      raise KsInvariantError("KS21 has {} vectors, got {}."
                             .format(KS21_NUM_VECTORS, len(self._vectors)))
    if len(self._contexts) != KS21_NUM_CONTEXTS:
      raise KsInvariantError("KS21 has {} contexts, got {}."
                             .format(KS21_NUM_CONTEXTS, len(self._contexts)))
    for c_index, context in enumerate(self._contexts, start=1):
      if not self.is_complete(context):
        raise KsInvariantError(
            "Context {} has {} members; a KS21 context is a basis of C^{}."
            .format(c_index, len(context), self._dimension), context=c_index)
    counts = self.context_counts()
    for vector_id, count in counts.items():
      if count != KS21_CONTEXTS_PER_VECTOR:
        raise KsInvariantError(
            "Vector {} appears in {} contexts, expected {}."
            .format(vector_id, count, KS21_CONTEXTS_PER_VECTOR))

  def context_counts(self):
    """Map vector id -> number of contexts containing it."""
    counts = collections.OrderedDict((i, 0) for i in self.ids)
    for context in self._contexts:
      for i in context:
        counts[i] += 1
    return counts

  def unit_vectors(self):
    """Array of shape (n, d) with one normalized vector per row."""
    return np.array([to_unit_vector(v) for v in self._vectors])

  def projectors(self):
    """Array of shape (n, d, d) holding |v_i><v_i| in the order of `vectors`."""
    units = self.unit_vectors()
    return np.einsum('ni,nj->nij', units, units.conj())

  def squared_norm_multiset(self):
    counter = collections.Counter(v.squared_norm for v in self._vectors)
    return dict(sorted(counter.items()))

  def delete_vector(self, vector_id):
    """Return a generic set without `vector_id`; contexts shrink accordingly."""
    self.vector(vector_id)
    vectors = [v for v in self._vectors if v.id != vector_id]
    contexts = [[i for i in c if i != vector_id] for c in self._contexts]
    contexts = [c for c in contexts if c]
    return KsSet(self._dimension, vectors, contexts, profile=GENERIC_PROFILE)

  def summary(self):
    return '{} vectors, {} contexts, d = {}'.format(
        len(self._vectors), len(self._contexts), self._dimension)

  def __repr__(self):
    return 'KsSet({}, profile={!r})'.format(self.summary(), self._profile)


def _parse_entry(entry, vector_id):
  if not isinstance(entry, (list, tuple)) or len(entry) != 2:
    raise KsFormatError("Vector {}: entry {!r} is not an [a, b] pair."
                        .format(vector_id, entry))
  a, b = entry
  if isinstance(a, bool) or isinstance(b, bool) or \
      not isinstance(a, int) or not isinstance(b, int):
    raise KsFormatError("Vector {}: entry {!r} must hold two integers."
                        .format(vector_id, entry))
  return EisensteinInt(a, b)


def parse_ks_set(document):
  """Build a KsSet from an already decoded JSON document (a dict)."""
  if not isinstance(document, dict):
    raise KsFormatError("A KS-set document must be a JSON object.")
  for key in ['dimension', 'vectors', 'contexts']:
    if key not in document:
      raise KsFormatError("Missing key {!r} in KS-set document.".format(key))
  dimension = document['dimension']
  if isinstance(dimension, bool) or not isinstance(dimension, int):
    raise KsFormatError("'dimension' must be an integer, got {!r}."
                        .format(dimension))
  profile = document.get('profile', GENERIC_PROFILE)
  if profile not in [KS21_PROFILE, GENERIC_PROFILE]:
    raise KsFormatError("Unknown profile {!r}.".format(profile))

  vectors = []
  if not isinstance(document['vectors'], list):
    raise KsFormatError("'vectors' must be a list.")
  for item in document['vectors']:
    if not isinstance(item, dict) or 'id' not in item or 'entries' not in item:
      raise KsFormatError("Each vector needs 'id' and 'entries', got {!r}."
                          .format(item))
    vector_id = item['id']
    if isinstance(vector_id, bool) or not isinstance(vector_id, int) \
        or vector_id < 1:
      raise KsFormatError("Vector ids are positive integers, got {!r}."
                          .format(vector_id))
    if not isinstance(item['entries'], list):
      raise KsFormatError("Vector {}: 'entries' must be a list."
                          .format(vector_id))
    entries = [_parse_entry(e, vector_id) for e in item['entries']]
    vectors.append(KsVector(vector_id, entries))

  contexts = document['contexts']
  if not isinstance(contexts, list) or \
      not all(isinstance(c, list) for c in contexts):
    raise KsFormatError("'contexts' must be a list of id lists.")
  for c in contexts:
    for i in c:
      if isinstance(i, bool) or not isinstance(i, int):
        raise KsFormatError("Context member {!r} is not an integer id."
                            .format(i))
  return KsSet(dimension, vectors, contexts, profile=profile)


def load_ks_set(source):
  """Load and validate a KS set.

  Args:
    source: bytes or str holding the document, a path, or a binary/text
      stream.
  Returns:
    a validated `KsSet`.
  Raises:
    KsFormatError: on JSON or schema errors.
    KsInvariantError: naming the first failing context/vector pair.
  """
  raw = read_source_bytes(source)
  try:
    document = json.loads(raw.decode('utf-8'))
  except (UnicodeDecodeError, ValueError) as e:
    raise KsFormatError("Cannot parse KS-set document: {}".format(e))
  ks_set = parse_ks_set(document)
  logger.debug("Loaded KS set: {}".format(ks_set.summary()))
  return ks_set


def read_source_bytes(source):
  if isinstance(source, bytes):
    return source
  if isinstance(source, str):
    if source.lstrip().startswith('{'):
      return source.encode('utf-8')
    with open(source, 'rb') as f:
      return f.read()
  raw = source.read()
  if isinstance(raw, str):
    raw = raw.encode('utf-8')
  return raw


def get_hash_value(some_bytes):
  return hashlib.md5(some_bytes).hexdigest()


def ks_set_fingerprint(source):
  """Content hash of the raw KS-set file, embedded in every artifact."""
  return get_hash_value(read_source_bytes(source))


def load_default_ks21():
  return load_ks_set(DEFAULT_KS21_PATH)


def dump_ks_set(ks_set):
  """Serialize back to the KS-set file format (one vector per line)."""
  lines = ['{',
           '  "dimension": {},'.format(ks_set.dimension),
           '  "profile": "{}",'.format(ks_set.profile),
           '  "vectors": [']
  for k, v in enumerate(ks_set.vectors):
    entries = ', '.join('[{},{}]'.format(e.a, e.b) for e in v.entries)
    sep = ',' if k < len(ks_set.vectors) - 1 else ''
    lines.append('    {{ "id": {}, "entries": [{}] }}{}'.format(
        v.id, entries, sep))
  lines.append('  ],')
  lines.append('  "contexts": [')
  for k, c in enumerate(ks_set.contexts):
    sep = ',' if k < len(ks_set.contexts) - 1 else ''
    lines.append('    [{}]{}'.format(', '.join(str(i) for i in c), sep))
  lines.append('  ]')
  lines.append('}')
  return '\n'.join(lines) + '\n'
