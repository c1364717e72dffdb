##
# File:    LayeredMultigraph.py
# Author:  J. Westbrook
# Date:    12-Jan-2026
#
# Updates:
#  19-Jan-2026 jdw add BinSet merge candidates for contiguous and non-contiguous binning
#  26-Jan-2026 jdw make layer edge arrays read-only and add multiset equivalence test
##
"""
Data model for layered, directed, weighted multigraphs of issued interbank loans.

Each layer holds parallel directed edges (lender -> borrower) carrying positive loan amounts.
Layers are indexed by maturity ordinal (or by bin index after layers have been merged).
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import enum
import logging

import numpy as np

logger = logging.getLogger(__name__)

LoanRecord = collections.namedtuple("LoanRecord", "lender, borrower, month, amount, maturity, rate")


class MaturityClass(enum.Enum):
    """The eight reported maturity classes, ordered from short to long."""

    LT_1D = "<1d"
    D_2_7 = "2-7d"
    D_8_30 = "8-30d"
    D_31_90 = "31-90d"
    D_91_180 = "91-180d"
    Y_05_1 = "0.5-1y"
    Y_1_3 = "1-3y"
    GT_3Y = ">3y"

    @property
    def code(self):
        return self.value

    @property
    def ordinal(self):
        return _MATURITY_ORDER.index(self)

    @classmethod
    def fromCode(cls, code):
        try:
            return cls(code)
        except ValueError:
            raise ValueError("unknown maturity code %r" % code)

    @classmethod
    def fromOrdinal(cls, ordinal):
        return _MATURITY_ORDER[ordinal]

    @classmethod
    def codes(cls):
        return [mc.value for mc in _MATURITY_ORDER]


_MATURITY_ORDER = list(MaturityClass)


def monthToLabel(month):
    """Return the calendar label (YYYY-MM) for a month index (month 1 = January 2000)."""
    month = int(month)
    return "%04d-%02d" % (2000 + (month - 1) // 12, (month - 1) % 12 + 1)


class BinSet(object):
    """Ordered partition of the layer ordinals into bins (a level of layer granularity).

    Bins are kept sorted internally and ordered by their smallest ordinal (OGB index order).
    """

    CONTIGUOUS = "contiguous"
    NONCONTIGUOUS = "noncontiguous"

    def __init__(self, bins, kind="contiguous", numLayers=None):
        self.__kind = self.normalizeKind(kind)
        bL = [tuple(sorted(int(ordinal) for ordinal in tB)) for tB in bins]
        if any(len(tB) == 0 for tB in bL):
            raise ValueError("empty bin in %r" % (bins,))
        self.__bins = tuple(sorted(bL, key=lambda tB: tB[0]))
        self.__numLayers = numLayers if numLayers is not None else sum(len(tB) for tB in self.__bins)
        #
        allL = sorted(ordinal for tB in self.__bins for ordinal in tB)
        if allL != list(range(self.__numLayers)):
            raise ValueError("bins %r do not partition %d layers" % (bins, self.__numLayers))
        if self.__kind == BinSet.CONTIGUOUS:
            for tB in self.__bins:
                if tB[-1] - tB[0] + 1 != len(tB):
                    raise ValueError("bin %r is not contiguous" % (tB,))

    @staticmethod
    def normalizeKind(kind):
        kind = str(kind).lower().replace("-", "").replace("_", "")
        if kind not in (BinSet.CONTIGUOUS, BinSet.NONCONTIGUOUS):
            raise ValueError("unknown binning kind %r" % kind)
        return kind

    @classmethod
    def singletons(cls, numLayers, kind="contiguous"):
        return cls([[ii] for ii in range(numLayers)], kind=kind, numLayers=numLayers)

    @classmethod
    def aggregate(cls, numLayers, kind="contiguous"):
        return cls([list(range(numLayers))], kind=kind, numLayers=numLayers)

    def getBins(self):
        return [list(tB) for tB in self.__bins]

    def getKind(self):
        return self.__kind

    def getBinCount(self):
        return len(self.__bins)

    def getLayerCount(self):
        return self.__numLayers

    def getBinIndex(self, ordinal):
        for ii, tB in enumerate(self.__bins):
            if ordinal in tB:
                return ii
        raise KeyError(ordinal)

    def isSingletons(self):
        return len(self.__bins) == self.__numLayers

    def isAggregate(self):
        return len(self.__bins) == 1

    def getMergeCandidates(self):
        """Return the (i, j) bin index pairs that may be merged (adjacent pairs only for contiguous binning)."""
        nB = len(self.__bins)
        if self.__kind == BinSet.CONTIGUOUS:
            return [(ii, ii + 1) for ii in range(nB - 1)]
        return [(ii, jj) for ii in range(nB) for jj in range(ii + 1, nB)]

    def merge(self, ii, jj):
        """Return a new bin set with bins ii and jj merged."""
        if ii == jj:
            raise ValueError("cannot merge bin %d with itself" % ii)
        bL = [list(tB) for kk, tB in enumerate(self.__bins) if kk not in (ii, jj)]
        bL.append(list(self.__bins[ii]) + list(self.__bins[jj]))
        return BinSet(bL, kind=self.__kind, numLayers=self.__numLayers)

    def compose(self, coarse):
        """Return the bin set over the original layers obtained by grouping these bins by the coarse bin set."""
        if coarse.getLayerCount() != len(self.__bins):
            raise ValueError("coarsening covers %d bins, expected %d" % (coarse.getLayerCount(), len(self.__bins)))
        bL = [[ordinal for binIdx in cB for ordinal in self.__bins[binIdx]] for cB in coarse.getBins()]
        kind = self.__kind if coarse.getKind() == self.__kind else BinSet.NONCONTIGUOUS
        return BinSet(bL, kind=kind, numLayers=self.__numLayers)

    def getLabels(self, layerLabels):
        return ["+".join(str(layerLabels[ordinal]) for ordinal in tB) for tB in self.__bins]

    def toList(self):
        return self.getBins()

    def __eq__(self, other):
        return isinstance(other, BinSet) and self.__bins == other.__bins and self.__numLayers == other.__numLayers

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.__bins, self.__numLayers))

    def __repr__(self):
        return "BinSet(%r, kind=%r)" % (self.getBins(), self.__kind)


class LayeredMultigraph(object):
    """Immutable directed multigraph with per-layer parallel edges and positive edge weights.

    Args:
        nodes (list): bank identifiers (node index = list position)
        layers (list): per-layer edge lists [(srcIndex, dstIndex, weight), ...]
        layerLabels (list): layer names (maturity codes or bin names)
        requireActive (bool, optional): reject nodes without edges in every layer. Defaults to True.
    """

    VERSION = 1

    def __init__(self, nodes, layers, layerLabels, requireActive=True):
        self.__nodes = [str(nd) for nd in nodes]
        self.__layerLabels = [str(lb) for lb in layerLabels]
        if len(self.__layerLabels) != len(layers):
            raise ValueError("layer label count %d does not match layer count %d" % (len(self.__layerLabels), len(layers)))
        self.__nodeIndexD = {nd: ii for ii, nd in enumerate(self.__nodes)}
        if len(self.__nodeIndexD) != len(self.__nodes):
            raise ValueError("duplicate node identifiers")
        numNodes = len(self.__nodes)
        self.__src = []
        self.__dst = []
        self.__wt = []
        for layerIdx, edgeL in enumerate(layers):
            if isinstance(edgeL, tuple) and len(edgeL) == 3 and isinstance(edgeL[0], np.ndarray):
                src, dst, wt = (np.array(edgeL[0], dtype=np.int64), np.array(edgeL[1], dtype=np.int64), np.array(edgeL[2], dtype=np.float64))
            else:
                src = np.array([int(tE[0]) for tE in edgeL], dtype=np.int64)
                dst = np.array([int(tE[1]) for tE in edgeL], dtype=np.int64)
                wt = np.array([float(tE[2]) for tE in edgeL], dtype=np.float64)
            if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= numNodes or dst.max() >= numNodes):
                raise ValueError("layer %d has an edge endpoint outside the node list" % layerIdx)
            if wt.size and not np.all(np.isfinite(wt) & (wt > 0)):
                raise ValueError("layer %d has a non-positive or non-finite edge weight" % layerIdx)
            for arr in (src, dst, wt):
                arr.setflags(write=False)
            self.__src.append(src)
            self.__dst.append(dst)
            self.__wt.append(wt)
        if requireActive and numNodes:
            kT = self.__totalDegrees(range(len(self.__src)))
            if np.any(kT == 0):
                raise ValueError("inactive nodes %r" % [self.__nodes[ii] for ii in np.nonzero(kT == 0)[0][:5]])

    # --- accessors ---
    def getNodes(self):
        return list(self.__nodes)

    def getNodeCount(self):
        return len(self.__nodes)

    def getNodeIndex(self, bankId):
        try:
            return self.__nodeIndexD[str(bankId)]
        except KeyError:
            raise KeyError("unknown node %r" % bankId)

    def hasNode(self, bankId):
        return str(bankId) in self.__nodeIndexD

    def getLayerCount(self):
        return len(self.__src)

    def getLayerLabels(self):
        return list(self.__layerLabels)

    def getEdgeArrays(self, layer):
        """Return read-only (src, dst, weight) arrays for one layer."""
        return self.__src[layer], self.__dst[layer], self.__wt[layer]

    def getEdges(self, layer):
        return list(zip(self.__src[layer].tolist(), self.__dst[layer].tolist(), self.__wt[layer].tolist()))

    def getEdgeCount(self, layers=None):
        return int(sum(self.__src[ii].size for ii in self.__layerList(layers)))

    def getSelfLoopCount(self, layers=None):
        return int(sum(np.count_nonzero(self.__src[ii] == self.__dst[ii]) for ii in self.__layerList(layers)))

    def getViewArrays(self, layers=None):
        """Return concatenated (src, dst, weight) arrays over a layer selection (None for all layers)."""
        lL = self.__layerList(layers)
        if not lL:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64)
        return (np.concatenate([self.__src[ii] for ii in lL]), np.concatenate([self.__dst[ii] for ii in lL]), np.concatenate([self.__wt[ii] for ii in lL]))

    # --- degrees, strengths and sizes ---
    def getDegrees(self, layers=None):
        """Return multigraph (in-degree, out-degree) arrays over all nodes for a layer selection."""
        src, dst, _ = self.getViewArrays(layers)
        numNodes = len(self.__nodes)
        return np.bincount(dst, minlength=numNodes), np.bincount(src, minlength=numNodes)

    def getActiveNodeIndices(self, layers=None):
        kIn, kOut = self.getDegrees(layers)
        return np.nonzero((kIn + kOut) > 0)[0]

    def getStrengths(self, layers=None):
        """Return (instrength, outstrength) arrays over all nodes for a layer selection."""
        src, dst, wt = self.getViewArrays(layers)
        numNodes = len(self.__nodes)
        return np.bincount(dst, weights=wt, minlength=numNodes), np.bincount(src, weights=wt, minlength=numNodes)

    def strength(self, bankId, layers=None):
        """Return (in, out, total) strength of a bank over a layer selection."""
        idx = self.getNodeIndex(bankId)
        sIn, sOut = self.getStrengths(layers)
        return float(sIn[idx]), float(sOut[idx]), float(sIn[idx] + sOut[idx])

    def layerSize(self, layers=None):
        """Return the total amount issued over a layer selection (each loan counted once)."""
        return float(sum(float(self.__wt[ii].sum()) for ii in self.__layerList(layers)))

    # --- layer algebra ---
    def collapse(self):
        return self.mergeLayers(BinSet.aggregate(self.getLayerCount(), kind=BinSet.NONCONTIGUOUS))

    def mergeLayers(self, bins):
        """Return the graph with one layer per bin, each the concatenation of its member layers."""
        if bins.getLayerCount() != self.getLayerCount():
            raise ValueError("bin set covers %d layers, graph has %d" % (bins.getLayerCount(), self.getLayerCount()))
        layers = []
        for tB in bins.getBins():
            layers.append(tuple(np.concatenate([arrL[ordinal] for ordinal in tB]) for arrL in (self.__src, self.__dst, self.__wt)))
        return LayeredMultigraph(self.__nodes, layers, bins.getLabels(self.__layerLabels), requireActive=False)

    def edgeMultiset(self, layer):
        return sorted(self.getEdges(layer))

    def isEquivalent(self, other, compareLabels=True):
        """Compare node lists, optionally layer labels, and per-layer multisets of weighted edges."""
        if self.getNodes() != other.getNodes() or self.getLayerCount() != other.getLayerCount():
            return False
        if compareLabels and self.getLayerLabels() != other.getLayerLabels():
            return False
        return all(self.edgeMultiset(ii) == other.edgeMultiset(ii) for ii in range(self.getLayerCount()))

    # --- serialization ---
    def toDict(self):
        edgeL = []
        for layerIdx in range(self.getLayerCount()):
            for src, dst, wt in self.getEdges(layerIdx):
                edgeL.append({"layer": layerIdx, "src": src, "dst": dst, "w": wt})
        return {"version": LayeredMultigraph.VERSION, "nodes": self.getNodes(), "layer_labels": self.getLayerLabels(), "edges": edgeL}

    @classmethod
    def fromDict(cls, dD):
        version = dD.get("version", cls.VERSION)
        if version != cls.VERSION:
            raise ValueError("unsupported graph document version %r" % version)
        layers = [[] for _ in dD["layer_labels"]]
        for eD in dD["edges"]:
            layers[int(eD["layer"])].append((eD["src"], eD["dst"], eD["w"]))
        return cls(dD["nodes"], layers, dD["layer_labels"])

    def __totalDegrees(self, layers):
        kIn, kOut = self.getDegrees(list(layers))
        return kIn + kOut

    def __layerList(self, layers):
        if layers is None:
            return list(range(len(self.__src)))
        if isinstance(layers, (int, np.integer)):
            return [int(layers)]
        return [int(ii) for ii in layers]

    def __repr__(self):
        return "LayeredMultigraph(nodes=%d, layers=%r, edges=%d)" % (self.getNodeCount(), self.__layerLabels, self.getEdgeCount())
