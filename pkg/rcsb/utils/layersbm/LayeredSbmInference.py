##
# File:    LayeredSbmInference.py
# Author:  J. Westbrook
# Date:    17-Jan-2026
#
# Updates:
#  25-Jan-2026 jdw agglomerative group merging with Metropolis-Hastings sweeps between levels
#  31-Jan-2026 jdw bin merging path search over granularities and posterior odds report
#   3-Feb-2026 jdw dispatch restarts and candidate bin sets through MultiProcUtil
#  12-Feb-2026 jdw fit each bin set under its own objective (layer-recovery code included); sampled merge partners
##
"""
Partition and granularity inference for the layered SBM.

The partition search merges groups agglomeratively from singletons with single-node
Metropolis-Hastings sweeps between merge levels, keeping the minimum description length state.
The granularity search merges bins pairwise from complete differentiation to complete aggregation
and returns the bin set with minimum total description length along the explored path.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import hashlib
import json
import logging
import math
import time

import numpy as np

from rcsb.utils.layersbm.BlockState import BlockState
from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDescriptionLength
from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDl
from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.SbmDescriptionLength import LN2
from rcsb.utils.layersbm.SbmDescriptionLength import WeightPrior
from rcsb.utils.multiproc.MultiProcUtil import MultiProcUtil

logger = logging.getLogger(__name__)

LOG10_2 = math.log10(2.0)


class FitConfig(object):
    """Inference settings.

    Args:
        seed (int): base random seed
        nSweeps (int): refinement sweeps at the selected group count
        nLevelSweeps (int): sweeps run after each agglomerative merge level
        nAnneal (int): independent agglomerative restarts
        betaMoves (str): inverse temperature schedule "constant:b", "linear:b0:b1" or "geometric:b0:b1"
        binningKind (str): "contiguous" or "noncontiguous"
        samples (int): maximum retained trace entries
        epsilon (float): uniform mixing weight of the move proposal
        numProc (int): worker processes for restarts and candidate bin sets
        weightPrior (WeightPrior): log-weight prior hyperparameters
    """

    SECTION_NAME = "layersbm_configuration"

    def __init__(self, **kwargs):
        self.seed = int(kwargs.get("seed", 0))
        self.nSweeps = int(kwargs.get("nSweeps", 1000))
        self.nLevelSweeps = int(kwargs.get("nLevelSweeps", 10))
        self.nAnneal = int(kwargs.get("nAnneal", 5))
        self.betaMoves = str(kwargs.get("betaMoves", "linear:1.0:10.0"))
        self.binningKind = BinSet.normalizeKind(kwargs.get("binningKind", BinSet.CONTIGUOUS))
        self.samples = int(kwargs.get("samples", 10000))
        self.epsilon = float(kwargs.get("epsilon", 0.1))
        self.numProc = int(kwargs.get("numProc", 1))
        self.weightPrior = kwargs.get("weightPrior", None) or WeightPrior()
        #
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.nSweeps < 0 or self.nLevelSweeps < 0:
            raise ValueError("sweep counts must be non-negative")
        if self.nAnneal < 1 or self.samples < 1 or self.numProc < 1:
            raise ValueError("nAnneal, samples and numProc must be positive")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon %r outside (0, 1]" % self.epsilon)
        self.getBetaSchedule(1)

    @classmethod
    def fromConfig(cls, cfgOb, sectionName=None, **overrides):
        """Build a configuration from a ConfigUtil object; keyword overrides take precedence."""
        sectionName = sectionName if sectionName else cls.SECTION_NAME
        keyD = {
            "seed": "SEED",
            "nSweeps": "N_SWEEPS",
            "nLevelSweeps": "N_LEVEL_SWEEPS",
            "nAnneal": "N_ANNEAL",
            "betaMoves": "BETA_MOVES",
            "binningKind": "BINNING_KIND",
            "samples": "SAMPLES",
            "epsilon": "EPSILON",
            "numProc": "NUM_PROC",
        }
        kwD = {}
        for attr, key in keyD.items():
            val = cfgOb.get(key, default=None, sectionName=sectionName)
            if val is not None:
                kwD[attr] = val
        dfltPrior = WeightPrior()
        kwD["weightPrior"] = WeightPrior(
            float(cfgOb.get("WEIGHT_PRIOR_MU0", default=dfltPrior.mu0, sectionName=sectionName)),
            float(cfgOb.get("WEIGHT_PRIOR_KAPPA0", default=dfltPrior.kappa0, sectionName=sectionName)),
            float(cfgOb.get("WEIGHT_PRIOR_NU0", default=dfltPrior.nu0, sectionName=sectionName)),
            float(cfgOb.get("WEIGHT_PRIOR_SIGMA0_SQ", default=dfltPrior.sigma0Sq, sectionName=sectionName)),
        )
        kwD.update({ky: val for ky, val in overrides.items() if val is not None})
        return cls(**kwD)

    def copy(self, **overrides):
        kwD = self.toDict()
        kwD["weightPrior"] = WeightPrior(*kwD["weightPrior"])
        kwD.update({ky: val for ky, val in overrides.items() if val is not None})
        return FitConfig(**kwD)

    def toDict(self):
        return {
            "seed": self.seed,
            "nSweeps": self.nSweeps,
            "nLevelSweeps": self.nLevelSweeps,
            "nAnneal": self.nAnneal,
            "betaMoves": self.betaMoves,
            "binningKind": self.binningKind,
            "samples": self.samples,
            "epsilon": self.epsilon,
            "numProc": self.numProc,
            "weightPrior": list(self.weightPrior),
        }

    def getConfigHash(self):
        """Short digest of the settings that affect results (worker count excluded)."""
        dD = self.toDict()
        del dD["numProc"]
        return hashlib.sha1(json.dumps(dD, sort_keys=True).encode("utf-8")).hexdigest()[:12]

    def getBetaSchedule(self, numSweeps):
        """Return the inverse temperature for each of numSweeps refinement sweeps."""
        fieldL = self.betaMoves.split(":")
        try:
            kind = fieldL[0].strip().lower()
            valL = [float(fld) for fld in fieldL[1:]]
        except ValueError:
            raise ValueError("malformed beta schedule %r" % self.betaMoves)
        if (kind == "constant" and len(valL) != 1) or (kind in ("linear", "geometric") and len(valL) != 2) or kind not in ("constant", "linear", "geometric"):
            raise ValueError("malformed beta schedule %r" % self.betaMoves)
        if any(val <= 0 for val in valL):
            raise ValueError("beta values must be positive in %r" % self.betaMoves)
        if kind == "constant":
            return [valL[0]] * numSweeps
        if kind == "linear":
            return np.linspace(valL[0], valL[1], numSweeps).tolist()
        return np.geomspace(valL[0], valL[1], numSweeps).tolist()

    def getFinalBeta(self):
        return self.getBetaSchedule(2)[-1]

    def __repr__(self):
        return "FitConfig(%r)" % self.toDict()


class FitResult(collections.namedtuple("FitResult", "partition, bins, dl, trace, seed, path, graphHash")):
    """Fitted partition and bin set with their layered description length (bits)."""

    __slots__ = ()

    def getBits(self):
        return self.dl.total

    def toDict(self):
        return {
            "partition": self.partition.toList(),
            "bins": self.bins.getBins(),
            "binning_kind": self.bins.getKind(),
            "bits": self.dl.toDict(),
            "seed": self.seed,
            "trace": [list(tT) for tT in self.trace],
            "path": [{"bins": binL, "bits": bits} for binL, bits in (self.path or [])],
            "graph_hash": self.graphHash,
        }

    @classmethod
    def fromDict(cls, dD):
        bins = BinSet(dD["bins"], kind=dD.get("binning_kind", BinSet.CONTIGUOUS))
        path = [(pD["bins"], pD["bits"]) for pD in dD.get("path", [])]
        return cls(Partition(dD["partition"]), bins, LayeredDl.fromDict(dD["bits"]), [tuple(tL) for tL in dD.get("trace", [])], dD["seed"], path, dD.get("graph_hash"))


class LayeredSbmInference(object):
    """Minimum description length fits of the partition and of the layer granularity.

    Args:
        config (FitConfig, optional): inference settings
    """

    def __init__(self, config=None, **kwargs):
        self.__config = config if config else FitConfig(**kwargs)
        self.__ldl = LayeredDescriptionLength(weightPrior=self.__config.weightPrior)

    def getConfig(self):
        return self.__config

    # --- partition search ---
    def fitPartition(self, graph, seed=None, bins=None):
        """Return (Partition, bits) minimizing the description length over all bins of a graph.

        Without a bin set every layer is modelled on its own; the bits then exclude the bin set prior.
        """
        bins = bins if bins else BinSet.singletons(graph.getLayerCount())
        partition, bits, _ = self.__fitPartition(graph, bins, self.__config.seed if seed is None else seed, self.__config.numProc)
        return partition, bits

    def samplePartitions(self, binnedGraph, initPartition, numSweeps, seed, beta=1.0):
        """Run the fixed group count Metropolis-Hastings chain and return the assignment after each sweep."""
        rng = self.__rng(seed, 0)
        state = BlockState(binnedGraph, initPartition, weightPrior=self.__config.weightPrior)
        stateL = []
        accepted = 0
        for _ in range(numSweeps):
            accepted += self.__sweep(state, rng, beta)
            stateL.append(tuple(state.getAssignment()))
        logger.debug("Sampled %d sweeps with %d accepted moves", numSweeps, accepted)
        return stateL

    def restartWorker(self, dataList, procName, optionsD, workingDir):
        """Multi-proc worker running agglomerative restarts (dataList holds restart indices)."""
        _ = workingDir
        successList = []
        retList = []
        for restart in dataList:
            try:
                nats, assignment = self.__agglomerate(optionsD["graph"], optionsD["bins"], optionsD["seed"], restart)
                successList.append(restart)
                retList.append((restart, nats, assignment))
            except Exception as e:
                logger.exception("%s failing restart %r with %s", procName, restart, str(e))
        return successList, retList, []

    def __fitPartition(self, graph, bins, seed, numProc):
        startTime = self.__begin(message="partition fit")
        restartL = list(range(self.__config.nAnneal))
        if numProc > 1 and len(restartL) > 1:
            mpu = MultiProcUtil(verbose=False)
            mpu.setOptions(optionsD={"graph": graph, "bins": bins, "seed": seed})
            mpu.set(workerObj=self, workerMethod="restartWorker")
            ok, failList, retLists, _ = mpu.runMulti(dataList=restartL, numProc=min(numProc, len(restartL)), numResults=1)
            if not ok or failList:
                raise ValueError("restarts failed %r" % failList)
            resultL = sorted(retLists[0], key=lambda tT: tT[0])
        else:
            resultL = [(restart,) + self.__agglomerate(graph, bins, seed, restart) for restart in restartL]
        _, restartNats, bestAssignment = min(resultL, key=lambda tT: (tT[1], tT[0]))
        #
        rng = self.__rng(seed, self.__config.nAnneal)
        state = BlockState(graph, Partition(bestAssignment), bins=bins, weightPrior=self.__config.weightPrior)
        bestNats = state.entropy()
        traceL = [(0, bestNats / LN2)]
        for sweep, beta in enumerate(self.__config.getBetaSchedule(self.__config.nSweeps), start=1):
            self.__sweep(state, rng, beta)
            nats = state.entropy()
            traceL.append((sweep, nats / LN2))
            if nats < bestNats - 1.0e-12:
                bestNats = nats
                bestAssignment = state.getAssignment()
        partition = Partition(bestAssignment)
        bits = self.__partitionBits(graph, bins, partition)
        logger.debug("Partition fit B=%d %.4f bits (restart best %.4f)", partition.getGroupCount(), bits, restartNats / LN2)
        self.__end(startTime, "partition fit")
        return partition, bits, self.__thin(traceL)

    def __partitionBits(self, graph, bins, partition):
        dl = self.__ldl.layeredDl(graph, partition, bins)
        return dl.total - dl.binsetPriorBits

    def __thin(self, traceL):
        if len(traceL) <= self.__config.samples:
            return traceL
        idxL = np.unique(np.linspace(0, len(traceL) - 1, self.__config.samples).round().astype(np.int64)).tolist()
        return [traceL[idx] for idx in idxL]

    def __agglomerate(self, graph, bins, seed, restart):
        """Merge from singletons down to one group; return (nats, assignment) of the best level."""
        rng = self.__rng(seed, restart)
        state = BlockState(graph, Partition.singletons(graph.getNodeCount()), bins=bins, weightPrior=self.__config.weightPrior)
        levelBeta = self.__config.getFinalBeta()
        bestNats = state.entropy()
        bestAssignment = state.getAssignment()
        while state.getGroupCount() > 1:
            self.__mergeLevel(state, rng)
            for _ in range(self.__config.nLevelSweeps):
                self.__sweep(state, rng, levelBeta)
            nats = state.entropy()
            logger.debug("Restart %d level B=%d %.4f nats", restart, state.getGroupCount(), nats)
            if nats < bestNats - 1.0e-12:
                bestNats = nats
                bestAssignment = state.getAssignment()
        return bestNats, bestAssignment

    def __mergeLevel(self, state, rng):
        groupL = list(state.getGroups())
        numGroups = len(groupL)
        if numGroups <= 10:
            best = None
            for ii, rr in enumerate(groupL):
                for tt in groupL[ii + 1 :]:
                    delta = state.mergeDelta(rr, tt)
                    if best is None or delta < best[0]:
                        best = (delta, rr, tt)
            state.mergeGroups(best[1], best[2])
            return
        target = max(10, int(numGroups / 1.3))
        proposalL = []
        for rr in groupL:
            # candidate partners reached through the edges of random members, plus a few uniform picks
            candS = set()
            nodeL = rng.choice(state.getMembers(rr), size=8).tolist()
            for node, uPick in zip(nodeL, rng.random(size=len(nodeL)).tolist()):
                candS.add(self.__neighborGroup(state, node, uPick))
            for idx in rng.integers(numGroups, size=3).tolist():
                candS.add(groupL[idx])
            candS.discard(rr)
            candS.discard(None)
            best = None
            for tt in sorted(candS):
                delta = state.mergeDelta(rr, tt)
                if best is None or delta < best[0]:
                    best = (delta, rr, tt)
            if best:
                proposalL.append(best)
        proposalL.sort()
        parentD = {}

        def findRoot(grp):
            while grp in parentD:
                grp = parentD[grp]
            return grp

        for _, rr, tt in proposalL:
            if state.getGroupCount() <= target:
                break
            rr = findRoot(rr)
            tt = findRoot(tt)
            if rr == tt:
                continue
            state.mergeGroups(rr, tt)
            parentD[rr] = tt

    def __sweep(self, state, rng, beta):
        """One sweep of N single-node move attempts at fixed group count; returns accepted moves."""
        numNodes = state.getNodeCount()
        if state.getGroupCount() < 2 or numNodes == 0:
            return 0
        epsilon = self.__config.epsilon
        nodeL = rng.integers(numNodes, size=numNodes).tolist()
        uL = rng.random(size=(numNodes, 3)).tolist()
        accepted = 0
        for node, (uBranch, uPick, uAccept) in zip(nodeL, uL):
            rr = state.getGroup(node)
            if state.getGroupSize(rr) == 1:
                continue
            groupL = state.getGroups()
            numGroups = len(groupL)
            nbrL = state.getNeighbors(node)
            kTot = state.getNeighborCount(node)
            if kTot == 0 or uBranch < epsilon:
                ss = groupL[min(int(uPick * numGroups), numGroups - 1)]
            else:
                ss = self.__neighborGroup(state, node, uPick)
            if ss == rr:
                continue
            delta = state.moveDelta(node, ss)
            logAccept = -beta * delta
            if kTot > 0:
                mS = 0
                mR = 0
                for jj, cnt in nbrL:
                    grp = state.getGroup(jj)
                    if grp == ss:
                        mS += cnt
                    elif grp == rr:
                        mR += cnt
                qFwd = epsilon / numGroups + (1.0 - epsilon) * mS / kTot
                qRev = epsilon / numGroups + (1.0 - epsilon) * mR / kTot
                logAccept += math.log(qRev) - math.log(qFwd)
            if logAccept >= 0.0 or uAccept < math.exp(logAccept):
                state.moveNode(node, ss)
                accepted += 1
        return accepted

    def __neighborGroup(self, state, node, uPick):
        """Group of a neighbor of node picked in proportion to edge counts (None for an isolated node)."""
        nbrL = state.getNeighbors(node)
        if not nbrL:
            return None
        target = uPick * state.getNeighborCount(node)
        cum = 0
        for jj, cnt in nbrL:
            cum += cnt
            if target < cum:
                return state.getGroup(jj)
        return state.getGroup(nbrL[-1][0])

    # --- granularity search ---
    def fitBins(self, graph, bins, numProc=None):
        """Fit the partition for one bin set and return its FitResult."""
        numProc = self.__config.numProc if numProc is None else numProc
        seed = self.__binSeed(bins)
        partition, _, traceL = self.__fitPartition(graph, bins, seed, numProc)
        dl = self.__ldl.layeredDl(graph, partition, bins)
        return FitResult(partition, bins, dl, traceL, self.__config.seed, None, self.graphHash(graph))

    def candidateWorker(self, dataList, procName, optionsD, workingDir):
        """Multi-proc worker fitting candidate bin sets (dataList holds (index, bins) pairs)."""
        _ = workingDir
        successList = []
        retList = []
        for idx, binL in dataList:
            try:
                fit = self.fitBins(optionsD["graph"], BinSet(binL, kind=optionsD["kind"]), numProc=1)
                successList.append((idx, binL))
                retList.append((idx, fit))
            except Exception as e:
                logger.exception("%s failing candidate %r with %s", procName, binL, str(e))
        return successList, retList, []

    def inferOgPath(self, graph):
        """Return the FitResults along the bin merge path, from singleton bins to complete aggregation."""
        startTime = self.__begin(message="granularity search")
        kind = self.__config.binningKind
        bins = BinSet.singletons(graph.getLayerCount(), kind=kind)
        pathL = [self.fitBins(graph, bins)]
        while not bins.isAggregate():
            candL = [bins.merge(ii, jj) for ii, jj in bins.getMergeCandidates()]
            fitL = self.__fitCandidates(graph, candL)
            best = min(range(len(fitL)), key=lambda idx: (fitL[idx].dl.total, idx))
            bins = candL[best]
            pathL.append(fitL[best])
            logger.info("Merged to bins %r total %.4f bits (%d candidates)", bins.getLabels(graph.getLayerLabels()), fitL[best].dl.total, len(candL))
        self.__end(startTime, "granularity search")
        return pathL

    def __fitCandidates(self, graph, candL):
        numProc = self.__config.numProc
        if numProc > 1 and len(candL) > 1:
            mpu = MultiProcUtil(verbose=False)
            mpu.setOptions(optionsD={"graph": graph, "kind": self.__config.binningKind})
            mpu.set(workerObj=self, workerMethod="candidateWorker")
            dataList = [(idx, cand.getBins()) for idx, cand in enumerate(candL)]
            ok, failList, retLists, _ = mpu.runMulti(dataList=dataList, numProc=min(numProc, len(candL)), numResults=1)
            if not ok or failList:
                raise ValueError("candidate bin sets failed %r" % failList)
            return [fit for _, fit in sorted(retLists[0], key=lambda tT: tT[0])]
        return [self.fitBins(graph, cand, numProc=numProc) for cand in candL]

    def inferOg(self, graph, pathL=None):
        """Return the FitResult of the optimal granularity along the bin merge path."""
        pathL = pathL if pathL else self.inferOgPath(graph)
        best = min(range(len(pathL)), key=lambda idx: (pathL[idx].dl.total, idx))
        return pathL[best]._replace(path=[(fit.bins.getBins(), fit.dl.total) for fit in pathL])

    def rejectReport(self, graph):
        """Return (og, log10 odds of complete differentiation vs og, log10 odds of complete aggregation vs og)."""
        pathL = self.inferOgPath(graph)
        og = self.inferOg(graph, pathL=pathL)
        return og, self.posteriorOdds(pathL[0], og), self.posteriorOdds(pathL[-1], og)

    @staticmethod
    def posteriorOdds(fitA, fitB):
        """log10 of the posterior odds ratio of fit A over fit B (positive favors A)."""
        if fitA.graphHash != fitB.graphHash:
            raise ValueError("fits were made on different graphs")
        return (fitB.dl.total - fitA.dl.total) * LOG10_2

    @staticmethod
    def graphHash(graph):
        return hashlib.sha1(json.dumps(graph.toDict(), sort_keys=True).encode("utf-8")).hexdigest()

    def __rng(self, seed, stream):
        entropyL = [int(val) for val in seed] if isinstance(seed, (list, tuple)) else [int(seed)]
        return np.random.default_rng(np.random.SeedSequence(entropyL + [int(stream)]))

    def __binSeed(self, bins):
        codeL = [int(self.__config.seed)]
        for binL in bins.getBins():
            codeL.extend(binL)
            codeL.append(bins.getLayerCount())
        return codeL

    def __begin(self, message=""):
        startTime = time.time()
        ts = time.strftime("%Y %m %d %H:%M:%S", time.localtime())
        logger.debug("Starting %s at %s", message, ts)
        return startTime

    def __end(self, startTime, message=""):
        endTime = time.time()
        ts = time.strftime("%Y %m %d %H:%M:%S", time.localtime())
        logger.debug("Completed %s at %s (%.4f seconds)", message, ts, endTime - startTime)
