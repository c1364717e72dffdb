##
# File:    MonthlySeriesAnalysis.py
# Author:  J. Westbrook
# Date:    19-Jan-2026
#
# Updates:
#  27-Jan-2026 jdw strength filtered NMI between consecutive months
#   3-Feb-2026 jdw yield curve summaries and per-term loan summaries from loan records
##
"""
Month-by-month granularity fits and the downstream series analyses: group counts, NMI between
consecutive months, bin sizes, group strengths, instrength ratios of important banks and
categorical yield curves.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import logging
import time

import numpy as np
from sklearn.metrics import normalized_mutual_info_score

from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.LayeredMultigraph import monthToLabel
from rcsb.utils.layersbm.LayeredSbmInference import FitConfig
from rcsb.utils.layersbm.LayeredSbmInference import LayeredSbmInference
from rcsb.utils.multiproc.MultiProcUtil import MultiProcUtil

logger = logging.getLogger(__name__)

MonthlyFit = collections.namedtuple("MonthlyFit", "month, fit, activeBanks, bCount, log10VsDifferentiation, log10VsAggregation, graph")
YieldSummary = collections.namedtuple("YieldSummary", "medians, weightedMeans, spread, counts")

SHORT_CLASSES = ("<1d", "2-7d", "8-30d")
LONG_CLASSES = ("1-3y", ">3y")


class MonthlySeriesAnalysis(object):
    """Series of monthly layered SBM fits and their downstream analyses.

    Args:
        config (FitConfig, optional): inference settings (numProc sets the month-level parallelism)
        shortClasses (tuple, optional): maturity codes pooled as "short" in the yield spread
        longClasses (tuple, optional): maturity codes pooled as "long" in the yield spread
    """

    def __init__(self, config=None, **kwargs):
        self.__config = config if config else FitConfig()
        self.__shortClasses = tuple(kwargs.get("shortClasses", SHORT_CLASSES))
        self.__longClasses = tuple(kwargs.get("longClasses", LONG_CLASSES))
        self.__failedMonths = []

    def getFailedMonths(self):
        return list(self.__failedMonths)

    # --- fitting ---
    def runSeries(self, graphD):
        """Fit each month independently (no interpolation of missing months).

        Months whose fit fails are logged and left out of the result; see getFailedMonths().

        Returns:
            list: MonthlyFit objects ordered by month
        """
        if not graphD:
            raise ValueError("empty monthly graph map")
        startTime = self.__begin(message="series fit")
        monthL = sorted(graphD)
        self.__failedMonths = []
        numProc = self.__config.numProc
        if numProc > 1 and len(monthL) > 1:
            mpu = MultiProcUtil(verbose=False)
            mpu.setOptions(optionsD={"graphD": graphD})
            mpu.set(workerObj=self, workerMethod="monthWorker")
            _, failList, retLists, _ = mpu.runMulti(dataList=monthL, numProc=min(numProc, len(monthL)), numResults=1)
            resultL = sorted(retLists[0], key=lambda mf: mf.month)
            okS = {mf.month for mf in resultL}
            self.__failedMonths = sorted(set(failList) | (set(monthL) - okS))
        else:
            _, resultL, _ = self.monthWorker(monthL, "serial", {"graphD": graphD, "innerProc": numProc}, None)
            okS = {mf.month for mf in resultL}
            self.__failedMonths = sorted(set(monthL) - okS)
        if self.__failedMonths:
            logger.warning("Fits failed for months %r", self.__failedMonths)
        self.__end(startTime, "series fit over %d months" % len(monthL))
        return resultL

    def monthWorker(self, dataList, procName, optionsD, workingDir):
        """Multi-proc worker fitting the optimal granularity of each month in dataList."""
        _ = workingDir
        successList = []
        retList = []
        for month in dataList:
            try:
                retList.append(self.fitMonth(month, optionsD["graphD"][month], numProc=optionsD.get("innerProc", 1)))
                successList.append(month)
            except Exception as e:
                logger.exception("%s failing month %r with %s", procName, month, str(e))
        return successList, retList, []

    def fitMonth(self, month, graph, numProc=1):
        """Fit the optimal granularity of one month with a seed derived from the base seed and the month."""
        monthSeed = int(np.random.SeedSequence([int(self.__config.seed), int(month)]).generate_state(1)[0])
        inf = LayeredSbmInference(self.__config.copy(seed=monthSeed, numProc=numProc))
        og, log10Diff, log10Agg = inf.rejectReport(graph)
        logger.info("Month %d (%s) bins %r B=%d %.2f bits", month, monthToLabel(month), og.bins.getLabels(graph.getLayerLabels()), og.partition.getGroupCount(), og.dl.total)
        return MonthlyFit(month, og, graph.getNodeCount(), og.partition.getGroupCount(), log10Diff, log10Agg, graph)

    # --- partition comparison ---
    def strengthFilter(self, graph, q):
        """Banks in decreasing strength order (ties by bank id) up to cumulative relative strength q."""
        if not 0.0 < q <= 1.0:
            raise ValueError("strength fraction q=%r outside (0, 1]" % q)
        sIn, sOut = graph.getStrengths()
        sTot = sIn + sOut
        total = float(np.sum(sTot))
        if total <= 0.0:
            raise ValueError("strength filter on an empty graph")
        nodeL = graph.getNodes()
        orderL = sorted((idx for idx in range(len(nodeL)) if sTot[idx] > 0), key=lambda idx: (-sTot[idx], nodeL[idx]))
        keepS = set()
        cum = 0.0
        for idx in orderL:
            keepS.add(nodeL[idx])
            cum += sTot[idx] / total
            if cum >= q - 1.0e-12:
                break
        return keepS

    def nmi(self, p1, p2):
        """Normalized mutual information (arithmetic mean normalization); 1 when both partitions are trivial."""
        if p1.getNodeCount() != p2.getNodeCount():
            raise ValueError("partitions cover %d and %d elements" % (p1.getNodeCount(), p2.getNodeCount()))
        if p1.getGroupCount() == 1 and p2.getGroupCount() == 1:
            return 1.0
        if p1.getGroupCount() == 1 or p2.getGroupCount() == 1:
            return 0.0
        return float(normalized_mutual_info_score(p1.getAssignment(), p2.getAssignment(), average_method="arithmetic"))

    def consecutiveNmi(self, series, q):
        """NMI between consecutive months over the intersection of their strength-filtered banks.

        Pairs across a missing month and pairs with an empty intersection are omitted.
        """
        fitD = {mf.month: mf for mf in series}
        rowL = []
        for month in sorted(fitD):
            prev = fitD.get(month - 1)
            if prev is None:
                continue
            cur = fitD[month]
            commonL = sorted(self.strengthFilter(cur.graph, q) & self.strengthFilter(prev.graph, q))
            if not commonL:
                logger.info("Month %d has no banks in common with month %d at q=%r", month, month - 1, q)
                continue
            pCur = cur.fit.partition.restrict([cur.graph.getNodeIndex(bankId) for bankId in commonL])
            pPrev = prev.fit.partition.restrict([prev.graph.getNodeIndex(bankId) for bankId in commonL])
            rowL.append((month, self.nmi(pPrev, pCur)))
        return rowL

    def banksPerGroup(self, series):
        return [(mf.month, mf.activeBanks / float(mf.bCount)) for mf in series]

    # --- bin level summaries ---
    def ogbSizes(self, graph, bins):
        return [graph.layerSize(binL) for binL in bins.getBins()]

    def groupStrengths(self, graph, partition, bins):
        """Per (bin, group) amounts lent out of, borrowed into and exchanged within each group.

        Returns:
            list: dicts {bin, group, s_out, s_in, s_internal} ordered by bin then group
        """
        groupOf = partition.getAssignmentArray()
        numGroups = partition.getGroupCount()
        rowL = []
        for binIdx, binL in enumerate(bins.getBins()):
            src, dst, wt = graph.getViewArrays(binL)
            gSrc = groupOf[src]
            gDst = groupOf[dst]
            same = gSrc == gDst
            sInt = np.bincount(gSrc[same], weights=wt[same], minlength=numGroups)
            sOut = np.bincount(gSrc[~same], weights=wt[~same], minlength=numGroups)
            sIn = np.bincount(gDst[~same], weights=wt[~same], minlength=numGroups)
            for grp in range(numGroups):
                rowL.append({"bin": binIdx, "group": grp, "s_out": float(sOut[grp]), "s_in": float(sIn[grp]), "s_internal": float(sInt[grp])})
        return rowL

    def instrengthRatioTable(self, graph, bins, topFraction):
        """Per bin (bank, strength, instrength/strength) for the banks in the top fraction by monthly strength.

        Returns:
            dict: {bin index: [(bank id, bin strength, ratio), ...]} ordered by decreasing bin strength
        """
        if not 0.0 < topFraction <= 1.0:
            raise ValueError("top fraction %r outside (0, 1]" % topFraction)
        sIn, sOut = graph.getStrengths()
        sTot = sIn + sOut
        posV = sTot[sTot > 0]
        if posV.size == 0:
            return {binIdx: [] for binIdx in range(bins.getBinCount())}
        cutoff = float(np.quantile(posV, 1.0 - topFraction))
        topL = [idx for idx in range(graph.getNodeCount()) if sTot[idx] > 0 and sTot[idx] >= cutoff]
        nodeL = graph.getNodes()
        tableD = {}
        for binIdx, binL in enumerate(bins.getBins()):
            bIn, bOut = graph.getStrengths(binL)
            rowL = []
            for idx in topL:
                strength = float(bIn[idx] + bOut[idx])
                if strength > 0:
                    rowL.append((nodeL[idx], strength, float(bIn[idx]) / strength))
            tableD[binIdx] = sorted(rowL, key=lambda tT: (-tT[1], tT[0]))
        return tableD

    # --- interest rates ---
    def yieldSummary(self, records):
        """Per maturity class median and volume-weighted mean rate plus the long minus short median spread.

        Raises:
            ValueError: no records carry a rate
        """
        rateD = {}
        for rec in records:
            if rec.rate is None:
                continue
            code = rec.maturity.code if isinstance(rec.maturity, MaturityClass) else MaturityClass.fromCode(rec.maturity).code
            rateD.setdefault(code, []).append((float(rec.rate), float(rec.amount)))
        if not rateD:
            raise ValueError("no rated records")
        medians = {}
        weightedMeans = {}
        counts = {}
        for code in MaturityClass.codes():
            if code not in rateD:
                continue
            rateV = np.array([rt for rt, _ in rateD[code]])
            volV = np.array([vol for _, vol in rateD[code]])
            medians[code] = float(np.median(rateV))
            weightedMeans[code] = float(np.sum(rateV * volV) / np.sum(volV))
            counts[code] = int(rateV.size)
        longL = [rt for code in self.__longClasses for rt, _ in rateD.get(code, [])]
        shortL = [rt for code in self.__shortClasses for rt, _ in rateD.get(code, [])]
        spread = float(np.median(longL) - np.median(shortL)) if longL and shortL else None
        return YieldSummary(medians, weightedMeans, spread, counts)

    def monthlyYieldCurves(self, records):
        """Return {month: YieldSummary} for every month with rated records."""
        monthD = {}
        for rec in records:
            monthD.setdefault(int(rec.month), []).append(rec)
        curveD = {}
        for month in sorted(monthD):
            try:
                curveD[month] = self.yieldSummary(monthD[month])
            except ValueError:
                logger.debug("Month %d has no rated records", month)
        return curveD

    def termSummary(self, records):
        """Per maturity class loan count, volume, mean loan size and mean interest paid per rated loan."""
        accD = {}
        for rec in records:
            code = rec.maturity.code if isinstance(rec.maturity, MaturityClass) else MaturityClass.fromCode(rec.maturity).code
            aD = accD.setdefault(code, {"loans": 0, "volume": 0.0, "rated": 0, "interest": 0.0})
            aD["loans"] += 1
            aD["volume"] += float(rec.amount)
            if rec.rate is not None:
                aD["rated"] += 1
                aD["interest"] += float(rec.amount) * float(rec.rate) / 100.0
        rowL = []
        for code in MaturityClass.codes():
            if code not in accD:
                continue
            aD = accD[code]
            rowL.append(
                {
                    "maturity": code,
                    "loans": aD["loans"],
                    "volume": aD["volume"],
                    "mean_volume": aD["volume"] / aD["loans"],
                    "mean_interest": aD["interest"] / aD["rated"] if aD["rated"] else None,
                }
            )
        return rowL

    # --- series document ---
    def seriesReport(self, series, qList=(0.95, 0.99, 1.0)):
        """Assemble the series document (timeline, group counts, NMI per q and bin level summaries)."""
        timelineL = []
        ogbL = []
        for mf in series:
            labels = mf.fit.bins.getLabels(mf.graph.getLayerLabels())
            timelineL.append(
                {
                    "month": mf.month,
                    "label": monthToLabel(mf.month),
                    "bins": mf.fit.bins.getBins(),
                    "bin_labels": labels,
                    "num_bins": mf.fit.bins.getBinCount(),
                    "bits": mf.fit.dl.total,
                    "log10_vs_differentiation": mf.log10VsDifferentiation,
                    "log10_vs_aggregation": mf.log10VsAggregation,
                }
            )
            ogbL.append({"month": mf.month, "sizes": self.ogbSizes(mf.graph, mf.fit.bins), "network_size": mf.graph.layerSize()})
        return {
            "months": [mf.month for mf in series],
            "og_timeline": timelineL,
            "b_counts": [[mf.month, mf.bCount] for mf in series],
            "active_banks": [[mf.month, mf.activeBanks] for mf in series],
            "banks_per_group": [list(tT) for tT in self.banksPerGroup(series)],
            "nmi": {repr(float(q)): [list(tT) for tT in self.consecutiveNmi(series, q)] for q in qList},
            "ogb_sizes": ogbL,
            "failed_months": self.getFailedMonths(),
        }

    def __begin(self, message=""):
        startTime = time.time()
        ts = time.strftime("%Y %m %d %H:%M:%S", time.localtime())
        logger.debug("Starting %s at %s", message, ts)
        return startTime

    def __end(self, startTime, message=""):
        endTime = time.time()
        ts = time.strftime("%Y %m %d %H:%M:%S", time.localtime())
        logger.info("Completed %s at %s (%.4f seconds)", message, ts, endTime - startTime)
