##
# File:    NetworkStatsUtil.py
# Author:  J. Westbrook
# Date:    18-Jan-2026
#
# Updates:
#  26-Jan-2026 jdw Erdos-Renyi null ensembles for clustering and path length dispatched through MultiProcUtil
#   2-Feb-2026 jdw per-year activity table and one-record layer report
##
"""
Descriptive statistics of single layers (or layer selections) of monthly loan networks.

Directed multigraph degrees count parallel loans.  Clustering, path length and assortativity use the
undirected simple view of the active banks; connectivity uses the directed simple view.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import logging
import math

import networkx as nx
import numpy as np
from scipy import stats

from rcsb.utils.layersbm.LayeredMultigraph import monthToLabel
from rcsb.utils.multiproc.MultiProcUtil import MultiProcUtil

logger = logging.getLogger(__name__)

DegreeSummary = collections.namedtuple("DegreeSummary", "nodes, inDegrees, outDegrees, totalDegrees, ccdf")
StretchedExpFit = collections.namedtuple("StretchedExpFit", "lam, beta, stderrLambda, stderrBeta, rss, numSamples, fatTail")
ClusteringReport = collections.namedtuple("ClusteringReport", "cObserved, cNullMean, cNullSd, z, nNull")
PathLengthReport = collections.namedtuple("PathLengthReport", "d, lccSize, dNullMean, dNullSd, nNull")
ComponentReport = collections.namedtuple("ComponentReport", "nWeak, nStrong, lccWeakFrac, lccStrongFrac")
ActivityReport = collections.namedtuple("ActivityReport", "activity, distribution, mean")


class NetworkStatsUtil(object):
    """Network statistics over a layer selection of a LayeredMultigraph.

    Layer selectors are a layer index, a list of layer indices, or None for all layers.

    Args:
        numProc (int, optional): worker processes for null model replicas. Defaults to 1.
        minFitSamples (int, optional): minimum positive samples for the stretched exponential fit. Defaults to 50.
    """

    def __init__(self, **kwargs):
        self.__numProc = kwargs.get("numProc", 1)
        self.__minFitSamples = kwargs.get("minFitSamples", 50)

    # --- views ---
    def getUndirectedView(self, graph, layer=None):
        """Undirected simple graph over the banks active in the layer selection (self-loops dropped)."""
        src, dst, _ = graph.getViewArrays(layer)
        ug = nx.Graph()
        ug.add_nodes_from(graph.getActiveNodeIndices(layer).tolist())
        ug.add_edges_from((ii, jj) for ii, jj in zip(src.tolist(), dst.tolist()) if ii != jj)
        return ug

    def getDirectedView(self, graph, layer=None):
        src, dst, _ = graph.getViewArrays(layer)
        dg = nx.DiGraph()
        dg.add_nodes_from(graph.getActiveNodeIndices(layer).tolist())
        dg.add_edges_from((ii, jj) for ii, jj in zip(src.tolist(), dst.tolist()) if ii != jj)
        return dg

    # --- density and degrees ---
    def directedDensity(self, graph, layer=None):
        """Fraction of ordered pairs of active banks linked by at least one loan."""
        numNodes = len(graph.getActiveNodeIndices(layer))
        if numNodes < 2:
            raise ValueError("directed density needs at least 2 active nodes, found %d" % numNodes)
        return self.getDirectedView(graph, layer).number_of_edges() / float(numNodes * (numNodes - 1))

    def degreeSummary(self, graph, layer=None):
        """Multigraph degrees of the active banks and the ccdf of their total degree."""
        nodeIdxV = graph.getActiveNodeIndices(layer)
        kIn, kOut = graph.getDegrees(layer)
        kInL = kIn[nodeIdxV].tolist()
        kOutL = kOut[nodeIdxV].tolist()
        kTotL = [ki + ko for ki, ko in zip(kInL, kOutL)]
        nodes = [graph.getNodes()[idx] for idx in nodeIdxV.tolist()]
        return DegreeSummary(nodes, kInL, kOutL, kTotL, self.ccdf(kTotL))

    @staticmethod
    def ccdf(values):
        """Return {k: fraction of values >= k} for k = 0 .. max(values)."""
        if not values:
            return {}
        countV = np.bincount(np.asarray(values, dtype=np.int64))
        tailV = np.cumsum(countV[::-1])[::-1] / float(len(values))
        return {kk: float(tailV[kk]) for kk in range(len(countV))}

    def jointDegreeTable(self, graph, layer=None):
        """Per active bank (in-degree, out-degree) pairs in node order."""
        ds = self.degreeSummary(graph, layer)
        return list(zip(ds.inDegrees, ds.outDegrees))

    def fitStretchedExponential(self, samples):
        """Maximum likelihood fit of ccdf(k) = exp(-(lambda k)^beta) to positive samples.

        Standard errors come from the observed Fisher information in (beta, lambda).  The rss compares
        log10 empirical and model ccdf at the distinct sample values.

        Raises:
            ValueError: fewer than the minimum positive samples, or degenerate (all equal) samples
        """
        xV = np.asarray([float(val) for val in samples if val > 0], dtype=np.float64)
        if xV.size < self.__minFitSamples:
            raise ValueError("stretched exponential fit needs %d positive samples, found %d" % (self.__minFitSamples, xV.size))
        if np.all(xV == xV[0]):
            raise ValueError("degenerate samples (all equal to %r)" % xV[0])
        beta, _, scale = stats.weibull_min.fit(xV, floc=0)
        lam = 1.0 / scale
        #
        logLamX = np.log(lam * xV)
        uV = np.exp(beta * logLamX)
        jBB = np.sum(1.0 / beta**2 + uV * logLamX**2)
        jLL = np.sum(beta / lam**2 + beta * (beta - 1.0) * uV / lam**2)
        jBL = -np.sum(1.0 / lam - uV / lam - beta * uV * logLamX / lam)
        try:
            covM = np.linalg.inv(np.array([[jBB, jBL], [jBL, jLL]]))
            stderrBeta = math.sqrt(max(covM[0, 0], 0.0))
            stderrLambda = math.sqrt(max(covM[1, 1], 0.0))
        except np.linalg.LinAlgError:
            stderrBeta = stderrLambda = float("nan")
        #
        uniqV, countV = np.unique(xV, return_counts=True)
        empCcdfV = np.cumsum(countV[::-1])[::-1] / float(xV.size)
        modelLog10V = -np.power(lam * uniqV, beta) / math.log(10.0)
        rss = float(np.sum((np.log10(empCcdfV) - modelLog10V) ** 2))
        fatTail = bool(0.0 < beta <= 1.0)
        if not fatTail:
            logger.info("Stretched exponential shape %.4f is outside (0, 1]", beta)
        return StretchedExpFit(float(lam), float(beta), stderrLambda, stderrBeta, rss, int(xV.size), fatTail)

    # --- clustering, paths and components ---
    def clusteringWithNull(self, graph, layer=None, nNull=100, seed=0):
        """Average local clustering against an Erdos-Renyi G(N, E) ensemble with the same N and E."""
        ug = self.getUndirectedView(graph, layer)
        if ug.number_of_nodes() < 3:
            raise ValueError("clustering needs at least 3 active nodes, found %d" % ug.number_of_nodes())
        if nNull < 1:
            raise ValueError("null ensemble size must be positive")
        cObs = nx.average_clustering(ug)
        nullL = self.__nullValues("clustering", ug.number_of_nodes(), ug.number_of_edges(), nNull, seed)
        cMean, cSd = self.__meanSd(nullL)
        zz = (cObs - cMean) / cSd if cSd > 0 else None
        return ClusteringReport(float(cObs), cMean, cSd, zz, nNull)

    def avgShortestPathLcc(self, graph, layer=None):
        """Return (mean pairwise distance, size) of the largest connected component of the undirected view."""
        ug = self.getUndirectedView(graph, layer)
        if ug.number_of_edges() == 0:
            raise ValueError("average shortest path of a graph without edges")
        return self.__lccPathLength(ug)

    def shortestPathWithNull(self, graph, layer=None, nNull=100, seed=0):
        """Report the largest component mean distance alongside the G(N, E) null ensemble value."""
        ug = self.getUndirectedView(graph, layer)
        if ug.number_of_edges() == 0:
            raise ValueError("average shortest path of a graph without edges")
        dd, lccSize = self.__lccPathLength(ug)
        nullL = self.__nullValues("path", ug.number_of_nodes(), ug.number_of_edges(), nNull, seed)
        dMean, dSd = self.__meanSd(nullL)
        return PathLengthReport(dd, lccSize, dMean, dSd, nNull)

    def componentStats(self, graph, layer=None):
        dg = self.getDirectedView(graph, layer)
        numNodes = dg.number_of_nodes()
        if numNodes == 0:
            return ComponentReport(0, 0, 0.0, 0.0)
        weakL = [len(cS) for cS in nx.weakly_connected_components(dg)]
        strongL = [len(cS) for cS in nx.strongly_connected_components(dg)]
        return ComponentReport(len(weakL), len(strongL), max(weakL) / float(numNodes), max(strongL) / float(numNodes))

    def degreeAssortativity(self, graph, layer=None):
        """Pearson correlation of endpoint degrees in the undirected simple view.

        Raises:
            ValueError: fewer than 2 edges, or zero degree variance at edge endpoints
        """
        ug = self.getUndirectedView(graph, layer)
        if ug.number_of_edges() < 2:
            raise ValueError("assortativity needs at least 2 edges")
        degL = [dd for ii, jj in ug.edges() for dd in (ug.degree(ii), ug.degree(jj))]
        if min(degL) == max(degL):
            raise ValueError("assortativity undefined for zero degree variance")
        return float(nx.degree_assortativity_coefficient(ug))

    # --- rankings and activity ---
    def kendallW(self, *rankings):
        """Kendall's coefficient of concordance for m >= 2 rankings (dicts item -> score) of the same items.

        Ties are given midranks with the usual tie correction.  Returns (W, p) with p from the chi-squared approximation.
        """
        if len(rankings) < 2:
            raise ValueError("concordance needs at least two rankings")
        itemL = sorted(rankings[0])
        if any(set(rk) != set(itemL) for rk in rankings[1:]):
            raise ValueError("rankings cover different item sets")
        numItems = len(itemL)
        if numItems < 3:
            raise ValueError("concordance needs at least 3 items, found %d" % numItems)
        numJudges = len(rankings)
        rankM = np.array([stats.rankdata([rk[item] for item in itemL]) for rk in rankings])
        tieSum = 0.0
        for rk in rankings:
            _, countV = np.unique([rk[item] for item in itemL], return_counts=True)
            tieSum += float(np.sum(countV**3 - countV))
        sumV = rankM.sum(axis=0)
        ssq = float(np.sum((sumV - sumV.mean()) ** 2))
        denom = numJudges**2 * (numItems**3 - numItems) - numJudges * tieSum
        if denom <= 0:
            raise ValueError("concordance undefined when every ranking is a complete tie")
        ww = 12.0 * ssq / denom
        pVal = float(stats.chi2.sf(numJudges * (numItems - 1) * ww, numItems - 1))
        return float(ww), pVal

    def totalActivity(self, graph):
        """Number of layers in which each bank is active, its distribution and mean."""
        activeM = np.array([(graph.getDegrees(layer)[0] + graph.getDegrees(layer)[1]) > 0 for layer in range(graph.getLayerCount())])
        countV = activeM.sum(axis=0) if activeM.size else np.zeros(graph.getNodeCount(), dtype=np.int64)
        activity = {nd: int(cnt) for nd, cnt in zip(graph.getNodes(), countV.tolist())}
        distribution = {bb: int(cnt) for bb, cnt in enumerate(np.bincount(countV, minlength=graph.getLayerCount() + 1).tolist())}
        mean = float(np.mean(countV)) if countV.size else 0.0
        return ActivityReport(activity, distribution, mean)

    def activityTable(self, graphD):
        """Per (year, layer) activity: months, mean active banks per month, loans, volume and loans per active bank."""
        accD = {}
        for month in sorted(graphD):
            graph = graphD[month]
            year = int(monthToLabel(month)[:4])
            for layer, label in enumerate(graph.getLayerLabels()):
                aD = accD.setdefault((year, layer), {"year": year, "layer": label, "months": 0, "bankMonths": 0, "loans": 0, "volume": 0.0})
                aD["months"] += 1
                aD["bankMonths"] += int(len(graph.getActiveNodeIndices(layer)))
                aD["loans"] += graph.getEdgeCount(layer)
                aD["volume"] += graph.layerSize(layer)
        rowL = []
        for key in sorted(accD):
            aD = accD[key]
            rowL.append(
                {
                    "year": aD["year"],
                    "layer": aD["layer"],
                    "months": aD["months"],
                    "mean_active_banks": aD["bankMonths"] / float(aD["months"]),
                    "loans": aD["loans"],
                    "volume": aD["volume"],
                    "loans_per_active_bank": aD["loans"] / float(aD["bankMonths"]) if aD["bankMonths"] else 0.0,
                }
            )
        return rowL

    def layerReport(self, graph, layer=None, nNull=100, seed=0):
        """Return every statistic for one layer selection; infeasible statistics are recorded under 'errors'."""
        rD = {"layer": self.__selectorLabel(graph, layer), "active_banks": int(len(graph.getActiveNodeIndices(layer))), "loans": graph.getEdgeCount(layer)}
        rD["volume"] = graph.layerSize(layer)
        errD = {}
        ds = self.degreeSummary(graph, layer)
        rD["mean_degree_in"] = float(np.mean(ds.inDegrees)) if ds.inDegrees else 0.0
        rD["mean_degree_out"] = float(np.mean(ds.outDegrees)) if ds.outDegrees else 0.0
        stepL = [
            ("density", lambda: self.directedDensity(graph, layer)),
            ("fit_in_degree", lambda: self.fitStretchedExponential(ds.inDegrees)._asdict()),
            ("fit_out_degree", lambda: self.fitStretchedExponential(ds.outDegrees)._asdict()),
            ("clustering", lambda: self.clusteringWithNull(graph, layer, nNull=nNull, seed=seed)._asdict()),
            ("path_length", lambda: self.shortestPathWithNull(graph, layer, nNull=nNull, seed=seed)._asdict()),
            ("components", lambda: self.componentStats(graph, layer)._asdict()),
            ("assortativity", lambda: self.degreeAssortativity(graph, layer)),
            ("kendall_w_in_out", lambda: list(self.kendallW(dict(zip(ds.nodes, ds.inDegrees)), dict(zip(ds.nodes, ds.outDegrees))))),
        ]
        for name, func in stepL:
            try:
                rD[name] = func()
            except ValueError as e:
                logger.info("Layer %s skipping %s (%s)", rD["layer"], name, str(e))
                rD[name] = None
                errD[name] = str(e)
        rD["errors"] = errD
        return rD

    # --- null models ---
    def nullModelWorker(self, dataList, procName, optionsD, workingDir):
        """Multi-proc worker evaluating G(N, E) null replicas (dataList holds replica indices)."""
        _ = procName
        _ = workingDir
        retList = []
        for replica in dataList:
            retList.append((replica, self.__nullValue(optionsD["measure"], optionsD["numNodes"], optionsD["numEdges"], optionsD["seed"], replica)))
        return dataList, retList, []

    def __nullValues(self, measure, numNodes, numEdges, nNull, seed):
        replicaL = list(range(nNull))
        if self.__numProc > 1 and nNull > 1:
            mpu = MultiProcUtil(verbose=False)
            mpu.setOptions(optionsD={"measure": measure, "numNodes": numNodes, "numEdges": numEdges, "seed": seed})
            mpu.set(workerObj=self, workerMethod="nullModelWorker")
            _, _, retLists, _ = mpu.runMulti(dataList=replicaL, numProc=min(self.__numProc, nNull), numResults=1)
            return [val for _, val in sorted(retLists[0], key=lambda tT: tT[0])]
        return [self.__nullValue(measure, numNodes, numEdges, seed, replica) for replica in replicaL]

    def __nullValue(self, measure, numNodes, numEdges, seed, replica):
        nxSeed = int(np.random.SeedSequence([int(seed), int(replica)]).generate_state(1)[0])
        ng = nx.gnm_random_graph(numNodes, numEdges, seed=nxSeed)
        if measure == "clustering":
            return float(nx.average_clustering(ng))
        return self.__lccPathLength(ng)[0]

    def __lccPathLength(self, ug):
        lcc = max(nx.connected_components(ug), key=lambda cS: (len(cS), -min(cS)))
        if len(lcc) < 2:
            return 0.0, len(lcc)
        return float(nx.average_shortest_path_length(ug.subgraph(lcc))), len(lcc)

    def __meanSd(self, valL):
        vV = np.asarray(valL, dtype=np.float64)
        return float(np.mean(vV)), float(np.std(vV, ddof=1)) if vV.size > 1 else 0.0

    def __selectorLabel(self, graph, layer):
        labelL = graph.getLayerLabels()
        if layer is None:
            return "+".join(labelL)
        if isinstance(layer, (int, np.integer)):
            return labelL[int(layer)]
        return "+".join(labelL[int(ii)] for ii in layer)
