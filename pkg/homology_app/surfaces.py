"""
Simple closed curves on punctured surfaces, through their action on a free fundamental group.

A preset fixes a free basis of pi_1 of a punctured surface, a finite list of
mapping classes as basis substitutions (each with its inverse), words for
some nonseparating simple closed curves and the loops around the punctures.
Every nonseparating simple closed curve is a mapping-class image of one seed
curve, so the images under phi of all such curves are the images of the
seeds along the automorphism orbit of phi.
"""

import logging

from group_app.characters import dim_fixed_subspace
from group_app.exceptions import NotAnAutomorphism

from .orbits import assert_images_closed, automorphism_orbit_images, verify_automorphism
from .words import Word, basis_words

logger = logging.getLogger(__name__)


def cyclic_class(word):
    """Canonical representative of the conjugacy class of ``word`` in the free group."""
    letters = word.cyclic_reduction().letters
    if not letters:
        return ()
    return min(letters[i:] + letters[:i] for i in range(len(letters)))


def unoriented_class(word):
    return min(cyclic_class(word), cyclic_class(word.inverse()))


def inner_automorphisms(rank):
    """Conjugation by each basis letter, paired with conjugation by its inverse."""
    basis = basis_words(rank)
    pairs = []
    for s in basis:
        forward = [x.conjugate(s) for x in basis]
        backward = [x.conjugate(s.inverse()) for x in basis]
        pairs.append((forward, backward))
    return pairs


class SurfacePreset:
    """Free basis data for a punctured surface and generators of its mapping class action."""

    def __init__(self, rank, autos, scc_seeds, peripheral, genus, punctures, name='', add_inner=True):
        self.rank = rank
        self.name = name
        self.genus = genus
        self.punctures = punctures
        self.mapping_classes = [([Word.coerce(w, rank) for w in sub], [Word.coerce(w, rank) for w in inv])
                                for sub, inv in autos]
        self.autos = list(self.mapping_classes) + (inner_automorphisms(rank) if add_inner else [])
        seeds = [Word.coerce(w, rank).require_nonempty() for w in scc_seeds]
        # an unoriented curve stands for both orientations
        self.scc_seeds = list(dict.fromkeys(seeds + [w.inverse() for w in seeds]))
        self.peripheral = [Word.coerce(w, rank) for w in peripheral]

    def __repr__(self):
        return f"<SurfacePreset {self.name or 'surface'} genus={self.genus} punctures={self.punctures}>"

    def verify(self):
        """Each substitution is an automorphism that permutes the puncture classes up to inversion."""
        expected = sorted(unoriented_class(p) for p in self.peripheral)
        for substitution, inverse in self.autos:
            verify_automorphism(substitution, inverse, self.rank)
            for sub in (substitution, inverse):
                moved = sorted(unoriented_class(p.substitute(sub)) for p in self.peripheral)
                if moved != expected:
                    logger.error(f"Substitution {[str(w) for w in sub]} moves the puncture loops")
                    raise NotAnAutomorphism("Substitution does not preserve the puncture loops",
                                            substitution=[str(w) for w in sub])
        return True

    def to_dict(self):
        return {
            'name': self.name,
            'rank': self.rank,
            'genus': self.genus,
            'punctures': self.punctures,
            'autos': [[str(w) for w in sub] for sub, _ in self.mapping_classes],
            'inverses': [[str(w) for w in inv] for _, inv in self.mapping_classes],
            'seeds': [str(w) for w in self.scc_seeds],
            'peripheral': [str(w) for w in self.peripheral],
        }


def sigma12_preset():
    """
    Torus with two punctures, pi_1 free on a, b, c: a goes around one puncture,
    b and c are a meridian and a longitude, and A B C b c goes around the other.
    Mapping classes: twists along b and c, and the twist moving b across the
    puncture surrounded by a.
    """
    twist_b = (['a', 'b', 'bc'], ['a', 'b', 'Bc'])
    twist_c = (['a', 'cb', 'c'], ['a', 'Cb', 'c'])
    push_b = (['a', 'bcA', 'c'], ['a', 'baC', 'c'])
    preset = SurfacePreset(
        rank=3,
        autos=[twist_b, twist_c, push_b],
        scc_seeds=['b', 'c'],
        peripheral=['a', 'ABCbc'],
        genus=1,
        punctures=2,
        name='sigma_1_2',
    )
    preset.verify()
    return preset


def preset_from_spec(spec):
    """Build and verify a preset from a validated preset spec (see ``serializer.PresetSpecSerializer``)."""
    preset = SurfacePreset(
        rank=spec['rank'],
        autos=list(zip(spec['autos'], spec['inverses'])),
        scc_seeds=spec['seeds'],
        peripheral=spec['peripheral'],
        genus=spec.get('genus', 0),
        punctures=spec.get('punctures', len(spec['peripheral'])),
        name=spec.get('name', ''),
    )
    preset.verify()
    return preset


def scc_image_set(phi, preset, budget=None):
    """phi-images of the nonseparating simple closed curves of the preset's surface."""
    if phi.rank != preset.rank:
        raise NotAnAutomorphism("Homomorphism rank differs from the preset rank", rank=phi.rank, preset=preset.rank)
    images = automorphism_orbit_images(phi, preset.autos, preset.scc_seeds, budget=budget)
    assert_images_closed(phi, images, "Simple closed curve images")
    return images


def irrscc_set(phi, table, preset, images=None, budget=None):
    """Rows of ``table`` in which the image of some nonseparating simple closed curve fixes a vector."""
    if images is None:
        images = scc_image_set(phi, preset, budget=budget)
    reps = {}
    for g in sorted(images):
        reps.setdefault(table.class_of[g], g)
    return [i for i in range(len(table)) if any(dim_fixed_subspace(table, i, g) > 0 for g in reps.values())]


def scc_homology_bound(table, rows, preset):
    """Multiplicity bound (2 genus - 2) dim V on the given rows, plus 2 on the trivial row."""
    bound = [(2 * preset.genus - 2) * d if i in rows else 0 for i, d in enumerate(table.dims)]
    bound[0] += 2
    return {'multiplicities': [max(m, 0) for m in bound], 'bound_applicable': preset.genus >= 2}
