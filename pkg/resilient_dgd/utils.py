# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import itertools

__all__ = ('AttrDict',
           'fmt_float',
           'subset_key',
           'iter_subsets',
           )


def fmt_float(value):
    """ Format float with 17 significant digits, enough to read it back
        bit-for-bit
    """
    return '%.17g' % value


def subset_key(ids):
    """ Normalize collection of agent ids to sorted tuple.

        Used as memoization key and for lexicographic tie-breaks
    """
    return tuple(sorted(ids))


def iter_subsets(ids, size):
    """ Iterate over all subsets of *ids* of given *size*,
        in lexicographic order of sorted tuples

        :param ids: iterable of agent ids
        :param int size: size of subsets to yield
        :return: iterator of tuples
    """
    return itertools.combinations(subset_key(ids), size)


class AttrDict(dict):
    """ Simple class to make dictionary able to use attribute get operation
        to get elements it contains using syntax like:

        >>> d = AttrDict(n=6, f=1)
        >>> print(d.n)
            6
        >>> print(d['f'])
            1
    """
    def __getattr__(self, name):
        try:
            return super(AttrDict, self).__getitem__(name)
        except KeyError as e:
            raise AttributeError(str(e))

    def __dir__(self):
        res = super(AttrDict, self).__dir__() + list(self.keys())
        return list(set(res))
