##
# File:    SbmDescriptionLength.py
# Author:  J. Westbrook
# Date:    14-Jan-2026
#
# Updates:
#  22-Jan-2026 jdw log-normal weight term via the normal-inverse-chi-squared marginal
#  29-Jan-2026 jdw expose scalar helpers shared with the incremental block state
##
"""
Description length (bits) of a single layer under the microcanonical directed degree-corrected SBM
with log-normal edge weights.

  Sigma = partition + edge matrix + degrees  (model part)
        + adjacency + weights                (data part)

All arithmetic is carried out in nats with log-gamma and converted to bits at the end.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import logging
import math

import numpy as np
from scipy.special import gammaln

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

WeightPrior = collections.namedtuple("WeightPrior", "mu0, kappa0, nu0, sigma0Sq", defaults=(0.0, 1.0, 1.0, 1.0))

BlockCounts = collections.namedtuple("BlockCounts", "ers, eOut, eIn, nR, kOut, kIn, groupOf")


class DlBreakdown(collections.namedtuple("DlBreakdown", "bitsPartition, bitsEdgeMatrix, bitsDegrees, bitsAdjacency, bitsWeights, total")):
    """Description length terms in bits.  The weight term is a log-density and may be negative."""

    __slots__ = ()

    def getDataBits(self):
        return self.bitsAdjacency + self.bitsWeights

    def getModelBits(self):
        return self.bitsPartition + self.bitsEdgeMatrix + self.bitsDegrees

    def toDict(self):
        return {
            "partition": self.bitsPartition,
            "edge_matrix": self.bitsEdgeMatrix,
            "degrees": self.bitsDegrees,
            "adjacency": self.bitsAdjacency,
            "weights": self.bitsWeights,
            "total": self.total,
        }

    @classmethod
    def fromDict(cls, dD):
        return cls(dD["partition"], dD["edge_matrix"], dD["degrees"], dD["adjacency"], dD["weights"], dD["total"])


def lnBinom(n, k):
    if k < 0 or k > n:
        raise ValueError("binomial coefficient C(%r, %r) undefined" % (n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def lnMultiset(n, k):
    """Log number of multisets of size k drawn from n kinds, C(n + k - 1, k)."""
    if k == 0:
        return 0.0
    return lnBinom(n + k - 1, k)


def lnWeightMarginal(n, sumZ, sumZSq, weightPrior):
    """Log marginal density of n log-weights with sufficient statistics (sum z, sum z^2).

    The normal mean and variance are integrated out under the normal-inverse-chi-squared prior.
    """
    if n == 0:
        return 0.0
    mu0, kappa0, nu0, sigma0Sq = weightPrior
    zBar = sumZ / n
    ss = max(sumZSq - sumZ * zBar, 0.0)
    kappaN = kappa0 + n
    nuN = nu0 + n
    scaleN = nu0 * sigma0Sq + ss + (kappa0 * n / kappaN) * (zBar - mu0) ** 2
    return (
        math.lgamma(nuN / 2.0)
        - math.lgamma(nu0 / 2.0)
        + 0.5 * (math.log(kappa0) - math.log(kappaN))
        + (nu0 / 2.0) * math.log(nu0 * sigma0Sq)
        - (nuN / 2.0) * math.log(scaleN)
        - (n / 2.0) * math.log(math.pi)
    )


def lnPartitionPrior(groupSizes, numNodes):
    """Negative log prior of a labeled partition with the given (nonzero) group sizes."""
    numGroups = len(groupSizes)
    return math.lgamma(numNodes + 1) - sum(math.lgamma(nr + 1) for nr in groupSizes) + lnBinom(numNodes - 1, numGroups - 1) + math.log(numNodes)


class SbmDescriptionLength(object):
    """Full (non-incremental) description length of one layer for a given partition.

    Args:
        weightPrior (WeightPrior, optional): hyperparameters (mu0, kappa0, nu0, sigma0Sq) of the log-weight prior.
    """

    def __init__(self, **kwargs):
        self.__weightPrior = kwargs.get("weightPrior", None) or WeightPrior()
        if self.__weightPrior.kappa0 <= 0 or self.__weightPrior.nu0 <= 0 or self.__weightPrior.sigma0Sq <= 0:
            raise ValueError("invalid weight prior %r" % (self.__weightPrior,))

    def getWeightPrior(self):
        return self.__weightPrior

    def blockCounts(self, graph, partition, layer=0):
        """Return the sufficient statistics (BlockCounts) of a layer under a partition."""
        self.__checkInputs(graph, partition)
        src, dst, _ = graph.getEdgeArrays(layer)
        numNodes = graph.getNodeCount()
        numGroups = partition.getGroupCount()
        groupOf = partition.getAssignmentArray()
        ers = np.zeros((numGroups, numGroups), dtype=np.int64)
        np.add.at(ers, (groupOf[src], groupOf[dst]), 1)
        kOut = np.bincount(src, minlength=numNodes)
        kIn = np.bincount(dst, minlength=numNodes)
        return BlockCounts(ers, ers.sum(axis=1), ers.sum(axis=0), partition.getGroupSizes(), kOut, kIn, groupOf)

    def dlPartition(self, partition, numNodes=None):
        numNodes = partition.getNodeCount() if numNodes is None else numNodes
        if numNodes != partition.getNodeCount():
            raise ValueError("partition covers %d nodes, expected %d" % (partition.getNodeCount(), numNodes))
        if numNodes < 1:
            raise ValueError("partition of an empty node set")
        sizes = partition.getGroupSizes().tolist()
        if any(nr == 0 for nr in sizes):
            raise ValueError("partition has empty groups")
        return lnPartitionPrior(sizes, numNodes) / LN2

    def dlEdgeMatrix(self, ers, numGroups=None, numEdges=None):
        ers = np.asarray(ers)
        if np.any(ers < 0):
            raise ValueError("negative edge count in block matrix")
        numGroups = ers.shape[0] if numGroups is None else numGroups
        total = int(ers.sum())
        if numEdges is not None and numEdges != total:
            raise ValueError("block matrix sums to %d, expected %d edges" % (total, numEdges))
        return lnMultiset(numGroups * numGroups, total) / LN2

    def dlDegrees(self, blockCounts):
        """Bits to encode the node degrees given the group stub counts (uniform conditional prior)."""
        bc = blockCounts
        numGroups = len(bc.nR)
        consistent = (
            np.array_equal(bc.eOut, bc.ers.sum(axis=1))
            and np.array_equal(bc.eIn, bc.ers.sum(axis=0))
            and np.array_equal(np.bincount(bc.groupOf, weights=bc.kOut, minlength=numGroups).astype(np.int64), bc.eOut)
            and np.array_equal(np.bincount(bc.groupOf, weights=bc.kIn, minlength=numGroups).astype(np.int64), bc.eIn)
        )
        if not consistent:
            raise ValueError("node degrees are inconsistent with the block stub counts")
        nats = float(np.sum(self.__lnMultisetArray(bc.nR, bc.eOut)) + np.sum(self.__lnMultisetArray(bc.nR, bc.eIn)))
        return nats / LN2

    def dlAdjacency(self, graph, partition, layer=0, blockCounts=None):
        """Bits of -log P(A | k, e, b) for the microcanonical directed degree-corrected SBM."""
        bc = self.blockCounts(graph, partition, layer)
        if blockCounts is not None and not all(np.array_equal(getattr(bc, fld), getattr(blockCounts, fld)) for fld in ("ers", "kOut", "kIn")):
            raise ValueError("block counts do not correspond to the layer and partition")
        src, dst, _ = graph.getEdgeArrays(layer)
        _, mult = np.unique(src * graph.getNodeCount() + dst, return_counts=True)
        nats = (
            -np.sum(gammaln(bc.ers + 1))
            - np.sum(gammaln(bc.kOut + 1))
            - np.sum(gammaln(bc.kIn + 1))
            + np.sum(gammaln(bc.eOut + 1))
            + np.sum(gammaln(bc.eIn + 1))
            + np.sum(gammaln(mult + 1))
        )
        return float(nats) / LN2

    def dlWeights(self, graph, partition, layer=0):
        """Bits of the log-normal weight term summed over ordered group pairs (may be negative)."""
        self.__checkInputs(graph, partition)
        src, dst, wt = graph.getEdgeArrays(layer)
        if wt.size == 0:
            return 0.0
        if np.any(wt <= 0):
            raise ValueError("non-positive edge weight")
        numGroups = partition.getGroupCount()
        groupOf = partition.getAssignmentArray()
        zV = np.log(wt)
        pairV = groupOf[src] * numGroups + groupOf[dst]
        nV = np.bincount(pairV, minlength=numGroups * numGroups)
        sV = np.bincount(pairV, weights=zV, minlength=numGroups * numGroups)
        qV = np.bincount(pairV, weights=zV * zV, minlength=numGroups * numGroups)
        nats = -np.sum(self.__lnWeightMarginalArray(nV, sV, qV)) + np.sum(zV)
        return float(nats) / LN2

    def layerBreakdown(self, graph, partition, layer=0):
        """Per-layer terms with the partition term left out (it is shared across layers)."""
        bc = self.blockCounts(graph, partition, layer)
        bEm = self.dlEdgeMatrix(bc.ers, numGroups=partition.getGroupCount())
        bDeg = self.dlDegrees(bc)
        bAdj = self.dlAdjacency(graph, partition, layer, blockCounts=bc)
        bWt = self.dlWeights(graph, partition, layer)
        return DlBreakdown(0.0, bEm, bDeg, bAdj, bWt, bEm + bDeg + bAdj + bWt)

    def descriptionLength(self, graph, partition, layer=0):
        lb = self.layerBreakdown(graph, partition, layer)
        bPart = self.dlPartition(partition, graph.getNodeCount())
        return lb._replace(bitsPartition=bPart, total=bPart + lb.total)

    def __lnMultisetArray(self, nV, kV):
        nV = np.asarray(nV, dtype=np.float64)
        kV = np.asarray(kV, dtype=np.float64)
        return np.where(kV > 0, gammaln(nV + kV) - gammaln(kV + 1) - gammaln(np.maximum(nV, 1.0)), 0.0)

    def __lnWeightMarginalArray(self, nV, sV, qV):
        mu0, kappa0, nu0, sigma0Sq = self.__weightPrior
        mask = nV > 0
        nV = nV[mask].astype(np.float64)
        sV = sV[mask]
        qV = qV[mask]
        zBar = sV / nV
        ss = np.maximum(qV - sV * zBar, 0.0)
        kappaN = kappa0 + nV
        nuN = nu0 + nV
        scaleN = nu0 * sigma0Sq + ss + (kappa0 * nV / kappaN) * (zBar - mu0) ** 2
        return (
            gammaln(nuN / 2.0)
            - math.lgamma(nu0 / 2.0)
            + 0.5 * (math.log(kappa0) - np.log(kappaN))
            + (nu0 / 2.0) * math.log(nu0 * sigma0Sq)
            - (nuN / 2.0) * np.log(scaleN)
            - (nV / 2.0) * math.log(math.pi)
        )

    def __checkInputs(self, graph, partition):
        if partition.getNodeCount() != graph.getNodeCount():
            raise ValueError("partition covers %d nodes, graph has %d" % (partition.getNodeCount(), graph.getNodeCount()))
