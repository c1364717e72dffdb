##
# File:    PlantedNetworkGenerator.py
# Author:  J. Westbrook
# Date:    20-Jan-2026
#
# Updates:
#  28-Jan-2026 jdw three-layer core-periphery / community benchmark and ready-made spec builders
#   4-Feb-2026 jdw loan record emission for ingestion round trips
#  12-Feb-2026 jdw per-class node propensities; denser ready-made specs
##
"""
Seeded generators of layered degree-corrected SBM networks with planted groups and planted
layer granularity, plus loan record emission in the ingestion format.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging

import numpy as np

from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.LayeredMultigraph import LoanRecord
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.Partition import Partition

logger = logging.getLogger(__name__)


class PlantedSpec(object):
    """Parameters of a planted layered network.

    Args:
        groupSizes (list): nodes per group
        classRates (list): per layer class, B x B expected edge counts between ordered group pairs
        layerClasses (list): class index of each layer (layers sharing a class share all parameters)
        classWeights (list): per layer class, (mu, sigma) of the log-normal weights, either one pair
                             or B x B nested pairs
        propensities (list, optional): per-node degree propensities, one vector shared by all classes or one
                                       vector per class (default all 1)
        layerLabels (list, optional): layer names (default the leading maturity codes)
        truthBins (list, optional): planted bin set overriding the grouping of layers by class
    """

    def __init__(self, groupSizes, classRates, layerClasses, classWeights, propensities=None, layerLabels=None, truthBins=None):
        self.groupSizes = [int(nr) for nr in groupSizes]
        self.classRates = [np.asarray(rates, dtype=np.float64) for rates in classRates]
        self.layerClasses = [int(cls) for cls in layerClasses]
        numGroups = len(self.groupSizes)
        self.classMu = []
        self.classSigma = []
        for wts in classWeights:
            wtA = np.asarray(wts, dtype=np.float64)
            if wtA.shape == (2,):
                wtA = np.broadcast_to(wtA, (numGroups, numGroups, 2))
            self.classMu.append(np.array(wtA[..., 0]))
            self.classSigma.append(np.array(wtA[..., 1]))
        numNodes = sum(self.groupSizes)
        propA = np.ones(numNodes) if propensities is None else np.asarray(propensities, dtype=np.float64)
        self.propensities = np.array(np.broadcast_to(propA, (len(self.classRates), propA.shape[-1]))) if propA.ndim == 1 else propA
        if layerLabels is None:
            codeL = MaturityClass.codes()
            layerLabels = codeL[: len(self.layerClasses)] if len(self.layerClasses) <= len(codeL) else ["L%d" % ii for ii in range(len(self.layerClasses))]
        self.layerLabels = [str(lb) for lb in layerLabels]
        self.truthBins = [list(binL) for binL in truthBins] if truthBins else None
        self.validate()

    def getGroupCount(self):
        return len(self.groupSizes)

    def getNodeCount(self):
        return sum(self.groupSizes)

    def getLayerCount(self):
        return len(self.layerClasses)

    def validate(self):
        """Raise ValueError for malformed or infeasible parameters."""
        numGroups = len(self.groupSizes)
        if numGroups < 1 or any(nr < 0 for nr in self.groupSizes):
            raise ValueError("invalid group sizes %r" % self.groupSizes)
        numClasses = len(self.classRates)
        if len(self.classMu) != numClasses:
            raise ValueError("weight parameters given for %d classes, rates for %d" % (len(self.classMu), numClasses))
        if not self.layerClasses or any(cls < 0 or cls >= numClasses for cls in self.layerClasses):
            raise ValueError("layer classes %r do not index the %d classes" % (self.layerClasses, numClasses))
        if len(self.layerLabels) != len(self.layerClasses):
            raise ValueError("layer label count does not match the layer count")
        for cls, rates in enumerate(self.classRates):
            if rates.shape != (numGroups, numGroups):
                raise ValueError("class %d rate matrix has shape %r, expected %r" % (cls, rates.shape, (numGroups, numGroups)))
            if np.any(rates < 0) or not np.all(np.isfinite(rates)):
                raise ValueError("class %d rate matrix has negative or non-finite entries" % cls)
            if self.classSigma[cls].shape != (numGroups, numGroups) or np.any(self.classSigma[cls] <= 0):
                raise ValueError("class %d log-normal sigma must be positive" % cls)
            for rr in range(numGroups):
                if self.groupSizes[rr] == 0 and (np.any(rates[rr, :] > 0) or np.any(rates[:, rr] > 0)):
                    raise ValueError("infeasible spec: empty group %d with positive expected edges" % rr)
        if self.propensities.shape != (numClasses, self.getNodeCount()) or np.any(self.propensities <= 0):
            raise ValueError("propensities must be positive, one per node and class")
        if self.truthBins:
            BinSet(self.truthBins, kind=BinSet.NONCONTIGUOUS, numLayers=len(self.layerClasses))
        return True

    def getTruthPartition(self):
        return Partition([grp for grp, nr in enumerate(self.groupSizes) for _ in range(nr)])

    def getTruthBins(self):
        """Planted bin set: the explicit override, else layers grouped by parameter class."""
        binL = self.truthBins if self.truthBins else [[ll for ll, cls in enumerate(self.layerClasses) if cls == cc] for cc in sorted(set(self.layerClasses))]
        try:
            return BinSet(binL, kind=BinSet.CONTIGUOUS, numLayers=len(self.layerClasses))
        except ValueError:
            return BinSet(binL, kind=BinSet.NONCONTIGUOUS, numLayers=len(self.layerClasses))

    def toDict(self):
        return {
            "group_sizes": self.groupSizes,
            "class_rates": [rates.tolist() for rates in self.classRates],
            "layer_classes": self.layerClasses,
            "class_weights": [np.stack([mu, sig], axis=-1).tolist() for mu, sig in zip(self.classMu, self.classSigma)],
            "propensities": self.propensities.tolist(),
            "layer_labels": self.layerLabels,
            "truth_bins": self.truthBins,
        }

    @classmethod
    def fromDict(cls, dD):
        return cls(
            dD["group_sizes"],
            dD["class_rates"],
            dD["layer_classes"],
            dD["class_weights"],
            propensities=dD.get("propensities"),
            layerLabels=dD.get("layer_labels"),
            truthBins=dD.get("truth_bins"),
        )


class PlantedNetworkGenerator(object):
    """Sample planted layered networks and emit them as loan records."""

    def __init__(self, **kwargs):
        self.__nodeIdFormat = kwargs.get("nodeIdFormat", "b%04d")

    def sample(self, spec, seed):
        """Sample one layered network.

        Per layer and ordered group pair the edge count is Poisson with the class rate; endpoints are drawn
        within the groups in proportion to the node propensities of the layer class.  Banks without edges are pruned.

        Returns:
            tuple: (LayeredMultigraph, truth Partition over the retained nodes, truth BinSet)
        """
        rng = np.random.default_rng(self.__seedSequence(seed))
        truthL = spec.getTruthPartition().getAssignment()
        numNodes = spec.getNodeCount()
        memberL = []
        offset = 0
        for nr in spec.groupSizes:
            memberL.append(np.arange(offset, offset + nr))
            offset += nr
        classProbL = [[propV[idxV] / propV[idxV].sum() if idxV.size else None for idxV in memberL] for propV in spec.propensities]
        #
        layerArrL = []
        numGroups = spec.getGroupCount()
        for cls in spec.layerClasses:
            rates = spec.classRates[cls]
            probL = classProbL[cls]
            srcL = []
            dstL = []
            wtL = []
            for rr in range(numGroups):
                for ss in range(numGroups):
                    if rates[rr, ss] <= 0:
                        continue
                    cnt = int(rng.poisson(rates[rr, ss]))
                    if cnt == 0:
                        continue
                    srcL.append(rng.choice(memberL[rr], size=cnt, p=probL[rr]))
                    dstL.append(rng.choice(memberL[ss], size=cnt, p=probL[ss]))
                    wtL.append(rng.lognormal(spec.classMu[cls][rr, ss], spec.classSigma[cls][rr, ss], size=cnt))
            if srcL:
                src = np.concatenate(srcL)
                dst = np.concatenate(dstL)
                wt = np.concatenate(wtL)
                order = np.lexsort((dst, src))
                layerArrL.append((src[order], dst[order], wt[order]))
            else:
                layerArrL.append((np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)))
        #
        degV = np.zeros(numNodes, dtype=np.int64)
        for src, dst, _ in layerArrL:
            degV += np.bincount(src, minlength=numNodes) + np.bincount(dst, minlength=numNodes)
        keepV = np.nonzero(degV > 0)[0]
        remapV = np.full(numNodes, -1, dtype=np.int64)
        remapV[keepV] = np.arange(keepV.size)
        layers = [(remapV[src], remapV[dst], wt) for src, dst, wt in layerArrL]
        nodeL = [self.__nodeIdFormat % idx for idx in keepV.tolist()]
        graph = LayeredMultigraph(nodeL, layers, spec.layerLabels)
        partition = Partition([truthL[idx] for idx in keepV.tolist()])
        logger.debug("Sampled %r (pruned %d isolated nodes)", graph, numNodes - keepV.size)
        return graph, partition, spec.getTruthBins()

    def sampleSeries(self, spec, months, seed):
        """Return {month: LayeredMultigraph}, each month sampled from an independent seeded stream."""
        return {int(month): self.sample(spec, [int(seed), int(month)])[0] for month in months}

    def emitLoanRecords(self, graph, month, rateSeed=None):
        """One loan record per parallel edge, layer by layer in stored edge order.

        Rates are left empty unless rateSeed is given, in which case they are drawn around a term-dependent level.

        Raises:
            ValueError: layer labels that are not maturity codes
        """
        maturityL = [MaturityClass.fromCode(label) for label in graph.getLayerLabels()]
        rng = np.random.default_rng(self.__seedSequence([int(rateSeed), int(month)])) if rateSeed is not None else None
        nodeL = graph.getNodes()
        recL = []
        for layer, maturity in enumerate(maturityL):
            for src, dst, wt in graph.getEdges(layer):
                rate = None
                if rng is not None:
                    rate = round(max(0.0, float(rng.normal(5.0 + 0.75 * maturity.ordinal, 0.5))), 4)
                recL.append(LoanRecord(nodeL[src], nodeL[dst], int(month), wt, maturity, rate))
        return recL

    # --- benchmarks and ready-made specs ---
    def corePeripherySpec(self):
        """Core (10) and two peripheries (20, 20) over three layers: perfect core-periphery (A), noisy core-periphery (B), two communities (C).

        A and B share one set of node propensities; C has its own, so the community layer is not a rescaled copy of the core-periphery degrees.
        """
        rng = np.random.default_rng(np.random.SeedSequence([50, 3]))
        cpProp = rng.lognormal(0.0, 1.0, size=50)
        commProp = rng.lognormal(0.0, 1.0, size=50)
        cp = [[600.0, 600.0, 600.0], [600.0, 0.0, 0.0], [600.0, 0.0, 0.0]]
        cpNoisy = [[600.0, 600.0, 600.0], [600.0, 30.0, 15.0], [600.0, 15.0, 30.0]]
        comm = [[0.0, 0.0, 0.0], [0.0, 600.0, 30.0], [0.0, 30.0, 600.0]]
        return PlantedSpec(
            [10, 20, 20],
            [cp, cpNoisy, comm],
            [0, 1, 2],
            [(2.0, 1.0), (2.0, 1.0), (0.0, 1.0)],
            propensities=[cpProp, cpProp, commProp],
            layerLabels=["A", "B", "C"],
            truthBins=[[0, 1], [2]],
        )

    def corePeripheryBenchmark(self, seed):
        return self.sample(self.corePeripherySpec(), seed)[0]

    def twoBlockSpec(self, numNodes=100, withinRate=400.0, betweenRate=20.0, numLayers=1, weight=(0.0, 1.0)):
        half = numNodes // 2
        rates = [[withinRate, betweenRate], [betweenRate, withinRate]]
        return PlantedSpec([half, numNodes - half], [rates], [0] * numLayers, [weight])

    def granularitySpec(self, numNodes=40, denseRate=400.0, sparseRate=40.0):
        """Three layers: the first two share an assortative pattern, the third is disassortative with heavier loans."""
        half = numNodes // 2
        assort = [[denseRate, sparseRate], [sparseRate, denseRate]]
        disassort = [[sparseRate, denseRate], [denseRate, sparseRate]]
        return PlantedSpec([half, numNodes - half], [assort, disassort], [0, 0, 1], [(1.0, 0.5), (3.0, 0.5)])

    def singlePatternSpec(self, numNodes=40, numLayers=3, denseRate=400.0, sparseRate=40.0):
        """Every layer drawn from one assortative two-group pattern."""
        half = numNodes // 2
        assort = [[denseRate, sparseRate], [sparseRate, denseRate]]
        return PlantedSpec([half, numNodes - half], [assort], [0] * numLayers, [(1.0, 0.5)])

    def multiPatternSpec(self, numNodes=45, denseRate=400.0, sparseRate=40.0):
        """Four layers in two contiguous pattern classes (assortative, then core-periphery)."""
        third = numNodes // 3
        sizes = [third, third, numNodes - 2 * third]
        assort = [[denseRate, sparseRate, sparseRate], [sparseRate, denseRate, sparseRate], [sparseRate, sparseRate, denseRate]]
        cp = [[denseRate, denseRate, denseRate], [denseRate, 0.0, 0.0], [denseRate, 0.0, 0.0]]
        return PlantedSpec(sizes, [assort, cp], [0, 0, 1, 1], [(1.0, 0.5), (2.5, 0.5)])

    def getSpecBuilder(self, name):
        builderD = {
            "core_periphery": self.corePeripherySpec,
            "granularity": self.granularitySpec,
            "two_block": self.twoBlockSpec,
            "single_pattern": self.singlePatternSpec,
            "multi_pattern": self.multiPatternSpec,
        }
        if name not in builderD:
            raise ValueError("unknown benchmark %r (expected one of %r)" % (name, sorted(builderD)))
        return builderD[name]

    def __seedSequence(self, seed):
        entropyL = [int(val) for val in seed] if isinstance(seed, (list, tuple)) else [int(seed)]
        return np.random.SeedSequence(entropyL)
