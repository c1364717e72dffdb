##
# File:    LayeredDescriptionLength.py
# Author:  J. Westbrook
# Date:    16-Jan-2026
#
# Updates:
#  24-Jan-2026 jdw add the non-contiguous bin set prior (Stirling numbers of the second kind)
#  12-Feb-2026 jdw extension term split per group pair, parallel edges interchangeable
##
"""
Description length of the independent-layers SBM over a bin set: a shared partition, one SBM per bin,
the layer-recovery extension term and the bin set prior.
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
from scipy.special import stirling2

from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.SbmDescriptionLength import LN2
from rcsb.utils.layersbm.SbmDescriptionLength import DlBreakdown
from rcsb.utils.layersbm.SbmDescriptionLength import SbmDescriptionLength

logger = logging.getLogger(__name__)


class LayeredDl(collections.namedtuple("LayeredDl", "perBin, partitionBits, extensionBits, binsetPriorBits, total")):
    """Layered description length in bits; per-bin breakdowns carry no partition term."""

    __slots__ = ()

    def toDict(self):
        return {
            "per_bin": [dl.toDict() for dl in self.perBin],
            "partition": self.partitionBits,
            "extension": self.extensionBits,
            "binset_prior": self.binsetPriorBits,
            "total": self.total,
        }

    @classmethod
    def fromDict(cls, dD):
        return cls([DlBreakdown.fromDict(bD) for bD in dD["per_bin"]], dD["partition"], dD["extension"], dD["binset_prior"], dD["total"])


class LayeredDescriptionLength(object):
    """Layered SBM description length for a partition and a bin set.

    Args:
        weightPrior (WeightPrior, optional): log-weight prior hyperparameters passed to the per-bin SBM terms
    """

    def __init__(self, **kwargs):
        self.__sbmDl = SbmDescriptionLength(weightPrior=kwargs.get("weightPrior", None))

    def getSbmDescriptionLength(self):
        return self.__sbmDl

    def layeredDl(self, graph, partition, bins):
        """Return the LayeredDl of (graph, partition, bins).

        Args:
            graph (LayeredMultigraph): graph over the original layers
            partition (Partition): node partition shared by every bin
            bins (BinSet): bin set over the graph layers

        Returns:
            LayeredDl: per-bin terms, shared partition term, extension term, bin set prior and total (bits)
        """
        binnedGraph = graph.mergeLayers(bins)
        perBinL = [self.__sbmDl.layerBreakdown(binnedGraph, partition, layer) for layer in range(binnedGraph.getLayerCount())]
        partitionBits = self.__sbmDl.dlPartition(partition, graph.getNodeCount())
        extensionBits = self.extensionTerm(graph, bins, partition)
        priorBits = self.binsetPrior(bins)
        total = partitionBits + sum(dl.total for dl in perBinL) + extensionBits + priorBits
        logger.debug("Bins %r partition B=%d total %.4f bits", bins.getBins(), partition.getGroupCount(), total)
        return LayeredDl(perBinL, partitionBits, extensionBits, priorBits, total)

    def extensionTerm(self, graph, bins, partition=None):
        """Bits to recover the original layers of each bin given the binned graph and the partition.

        For every ordered group pair the bin's edges are split among the member layers: first the
        per-layer counts, then which edges go where.  Parallel edges on one node pair are
        interchangeable, so their orderings are not paid for.

        Args:
            graph (LayeredMultigraph): graph over the original layers
            bins (BinSet): bin set over the graph layers
            partition (Partition, optional): node partition (default: a single group)

        Returns:
            float: extension term in bits
        """
        if bins.getLayerCount() != graph.getLayerCount():
            raise ValueError("bin set covers %d layers, graph has %d" % (bins.getLayerCount(), graph.getLayerCount()))
        numNodes = graph.getNodeCount()
        partition = partition if partition is not None else Partition.trivial(numNodes)
        if partition.getNodeCount() != numNodes:
            raise ValueError("partition covers %d nodes, graph has %d" % (partition.getNodeCount(), numNodes))
        groupOf = partition.getAssignmentArray()
        numGroups = max(partition.getGroupCount(), 1)
        nats = 0.0
        for binL in bins.getBins():
            if len(binL) == 1 or graph.getEdgeCount(binL) == 0:
                continue
            blockL = []
            pairL = []
            for ordinal in binL:
                src, dst, _ = graph.getEdgeArrays(ordinal)
                blockL.append(np.bincount(groupOf[src] * numGroups + groupOf[dst], minlength=numGroups * numGroups))
                pairL.append(src.astype(np.int64) * numNodes + dst)
            layerErs = np.vstack(blockL)
            ers = layerErs.sum(axis=0)
            width = len(binL)
            nats += float(np.sum(gammaln(ers + 1)) - np.sum(gammaln(layerErs + 1)))
            nats += float(np.sum(gammaln(ers + width) - gammaln(ers + 1))) - ers.size * math.lgamma(width)
            nats -= float(np.sum(gammaln(np.unique(np.concatenate(pairL), return_counts=True)[1] + 1)))
            nats += sum(float(np.sum(gammaln(np.unique(pairV, return_counts=True)[1] + 1))) for pairV in pairL)
        return nats / LN2

    def binsetPrior(self, bins):
        return self.binsetPriorBits(bins.getBinCount(), bins.getLayerCount(), bins.getKind())

    @staticmethod
    def binsetPriorBits(numBins, numLayers, kind=BinSet.CONTIGUOUS):
        """Bits of the uniform prior: 1/L over the bin count, then uniform over bin sets with that count."""
        if numBins < 1 or numBins > numLayers:
            raise ValueError("bin count %d outside 1..%d" % (numBins, numLayers))
        if BinSet.normalizeKind(kind) == BinSet.CONTIGUOUS:
            count = math.comb(numLayers - 1, numBins - 1)
        else:
            count = int(stirling2(numLayers, numBins, exact=True))
        return math.log2(numLayers) + math.log2(count)
