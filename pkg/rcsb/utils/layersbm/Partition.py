##
# File:    Partition.py
# Author:  J. Westbrook
# Date:    14-Jan-2026
#
# Updates:
#  21-Jan-2026 jdw add restrict() for comparisons over intersected bank sets
##
"""
Node-to-group assignment with canonical (first appearance) group labels.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging

import numpy as np

logger = logging.getLogger(__name__)


class Partition(object):
    """Assignment of N nodes to B nonempty groups.

    Group labels are 0-based and canonical: groups are numbered in order of first appearance,
    so two assignments that differ only by a relabeling compare equal.

    Args:
        assignment (list): group label per node (any hashable labels)
        numGroups (int, optional): declared group count; labels must then be integers in 0..numGroups-1
                                   and every declared group must be occupied.
    """

    def __init__(self, assignment, numGroups=None):
        labelL = [lb.item() if isinstance(lb, np.generic) else lb for lb in assignment]
        if numGroups is not None:
            if any(not isinstance(lb, int) or lb < 0 or lb >= numGroups for lb in labelL):
                raise ValueError("group labels outside 0..%d" % (numGroups - 1))
            emptyL = sorted(set(range(numGroups)) - set(labelL))
            if emptyL:
                raise ValueError("empty groups %r" % emptyL)
        mapD = {}
        for lb in labelL:
            if lb not in mapD:
                mapD[lb] = len(mapD)
        self.__assignment = tuple(mapD[lb] for lb in labelL)
        self.__numGroups = len(mapD)

    @classmethod
    def singletons(cls, numNodes):
        return cls(list(range(numNodes)))

    @classmethod
    def trivial(cls, numNodes):
        return cls([0] * numNodes)

    def getAssignment(self):
        return list(self.__assignment)

    def getAssignmentArray(self):
        return np.array(self.__assignment, dtype=np.int64)

    def getGroup(self, nodeIndex):
        return self.__assignment[nodeIndex]

    def getGroupCount(self):
        return self.__numGroups

    def getNodeCount(self):
        return len(self.__assignment)

    def getGroupSizes(self):
        return np.bincount(np.array(self.__assignment, dtype=np.int64), minlength=self.__numGroups)

    def getGroupMembers(self, group):
        return [ii for ii, lb in enumerate(self.__assignment) if lb == group]

    def restrict(self, nodeIndices):
        """Return the partition induced on a subset of nodes (relabelled canonically)."""
        return Partition([self.__assignment[ii] for ii in nodeIndices])

    def toList(self):
        return self.getAssignment()

    def __len__(self):
        return len(self.__assignment)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.__assignment == other.__assignment

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.__assignment)

    def __repr__(self):
        return "Partition(B=%d, N=%d)" % (self.__numGroups, len(self.__assignment))
