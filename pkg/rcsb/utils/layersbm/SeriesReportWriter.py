##
# File:    SeriesReportWriter.py
# Author:  J. Westbrook
# Date:    5-Feb-2026
#
# Updates:
#  10-Feb-2026 jdw yield and term summary tables from loan records
##
"""
Write plot-ready CSV tables and JSON documents for statistics, fits and monthly series.

Every CSV starts with a comment line carrying the seed and configuration hash followed by the column
header. Every JSON document carries a "_meta" object with the same values.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import json
import logging
import os

from rcsb.utils.io.MarshalUtil import MarshalUtil
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.LayeredMultigraph import monthToLabel

logger = logging.getLogger(__name__)


class SeriesReportWriter(object):
    """Serialized writer of report files under one output directory.

    Args:
        outPath (str): output directory (created if missing)
        seed (int): seed recorded in every output
        configHash (str): configuration digest recorded in every output
    """

    def __init__(self, outPath, seed, configHash, **kwargs):
        self.__outPath = outPath
        self.__seed = int(seed) if seed is not None else None
        self.__configHash = configHash
        self.__jsonIndent = kwargs.get("jsonIndent", 2)
        self.__mU = MarshalUtil(workPath=outPath)
        self.__mU.mkdir(outPath)
        self.__writtenL = []

    def getMeta(self):
        return {"seed": self.__seed, "config_hash": self.__configHash}

    def getHeaderComment(self):
        return "# seed=%s config=%s" % ("none" if self.__seed is None else str(self.__seed), self.__configHash)

    def getWrittenFiles(self):
        return list(self.__writtenL)

    def getPath(self, fileName):
        return os.path.join(self.__outPath, fileName)

    # --- primitives ---
    def writeCsv(self, fileName, columnL, rowL):
        """Write rows (dicts keyed by column or sequences in column order) as a commented CSV table."""
        lineL = [self.getHeaderComment(), ",".join(columnL)]
        for row in rowL:
            valL = [row.get(col) for col in columnL] if isinstance(row, dict) else list(row)
            lineL.append(",".join(self.__formatCell(val) for val in valL))
        return self.__export(fileName, lineL, "list")

    def writeJson(self, fileName, docD):
        """Write a JSON document with sorted keys and the "_meta" object."""
        outD = dict(docD)
        outD["_meta"] = self.getMeta()
        sortedD = json.loads(json.dumps(outD, sort_keys=True))
        return self.__export(fileName, sortedD, "json")

    # --- statistics ---
    def writeStatsReport(self, month, reportL):
        """Per layer statistics of one month as JSON and as one flat CSV row per layer selection."""
        tag = "%04d" % int(month)
        ok = self.writeJson("stats-%s.json" % tag, {"month": int(month), "label": monthToLabel(month), "layers": reportL})
        columnL = [
            "layer",
            "active_banks",
            "loans",
            "volume",
            "density",
            "mean_degree_in",
            "mean_degree_out",
            "fit_in_lambda",
            "fit_in_beta",
            "fit_out_lambda",
            "fit_out_beta",
            "clustering",
            "clustering_null_mean",
            "clustering_z",
            "path_length",
            "path_length_null_mean",
            "lcc_size",
            "n_weak",
            "n_strong",
            "assortativity",
            "kendall_w",
            "errors",
        ]
        rowL = []
        for rD in reportL:
            rowL.append(
                {
                    "layer": rD["layer"],
                    "active_banks": rD["active_banks"],
                    "loans": rD["loans"],
                    "volume": rD["volume"],
                    "density": rD.get("density"),
                    "mean_degree_in": rD["mean_degree_in"],
                    "mean_degree_out": rD["mean_degree_out"],
                    "fit_in_lambda": self.__field(rD, "fit_in_degree", "lam"),
                    "fit_in_beta": self.__field(rD, "fit_in_degree", "beta"),
                    "fit_out_lambda": self.__field(rD, "fit_out_degree", "lam"),
                    "fit_out_beta": self.__field(rD, "fit_out_degree", "beta"),
                    "clustering": self.__field(rD, "clustering", "cObserved"),
                    "clustering_null_mean": self.__field(rD, "clustering", "cNullMean"),
                    "clustering_z": self.__field(rD, "clustering", "z"),
                    "path_length": self.__field(rD, "path_length", "d"),
                    "path_length_null_mean": self.__field(rD, "path_length", "dNullMean"),
                    "lcc_size": self.__field(rD, "path_length", "lccSize"),
                    "n_weak": self.__field(rD, "components", "nWeak"),
                    "n_strong": self.__field(rD, "components", "nStrong"),
                    "assortativity": rD.get("assortativity"),
                    "kendall_w": rD["kendall_w_in_out"][0] if rD.get("kendall_w_in_out") else None,
                    "errors": ";".join(sorted(rD.get("errors", {}))),
                }
            )
        return self.writeCsv("stats-%s.csv" % tag, columnL, rowL) and ok

    # --- fits ---
    def writeFit(self, month, fit, log10VsDifferentiation, log10VsAggregation):
        docD = {"month": int(month), "fit": fit.toDict(), "log10_vs_differentiation": log10VsDifferentiation, "log10_vs_aggregation": log10VsAggregation}
        return self.writeJson("fit-%04d.json" % int(month), docD)

    # --- series ---
    def writeSeriesReport(self, analysis, series, qList, topFractions):
        """Series JSON plus the og_timeline, b_counts, nmi, ogb_sizes, group_strengths and instrength tables."""
        reportD = analysis.seriesReport(series, qList=qList)
        ok = self.writeJson("series.json", reportD)
        #
        timelineL = [
            [tD["month"], tD["label"], tD["num_bins"], "|".join(tD["bin_labels"]), tD["bits"], tD["log10_vs_differentiation"], tD["log10_vs_aggregation"]]
            for tD in reportD["og_timeline"]
        ]
        ok = self.writeCsv("og_timeline.csv", ["month", "label", "num_bins", "bins", "bits", "log10_vs_differentiation", "log10_vs_aggregation"], timelineL) and ok
        #
        countL = [[mf.month, monthToLabel(mf.month), mf.bCount, mf.activeBanks, mf.activeBanks / float(mf.bCount)] for mf in series]
        ok = self.writeCsv("b_counts.csv", ["month", "label", "num_groups", "active_banks", "banks_per_group"], countL) and ok
        #
        qKeyL = [repr(float(q)) for q in qList]
        nmiD = {}
        for qKey in qKeyL:
            for month, val in reportD["nmi"][qKey]:
                nmiD.setdefault(month, {})[qKey] = val
        nmiRowL = [[month, monthToLabel(month)] + [nmiD[month].get(qKey) for qKey in qKeyL] for month in sorted(nmiD)]
        ok = self.writeCsv("nmi.csv", ["month", "label"] + ["q=%s" % qKey for qKey in qKeyL], nmiRowL) and ok
        #
        sizeRowL = []
        strengthRowL = []
        instrengthRowL = []
        for mf in series:
            bins = mf.fit.bins
            labelL = bins.getLabels(mf.graph.getLayerLabels())
            for binIdx, size in enumerate(analysis.ogbSizes(mf.graph, bins)):
                sizeRowL.append([mf.month, binIdx + 1, labelL[binIdx], size, mf.graph.layerSize()])
            for rD in analysis.groupStrengths(mf.graph, mf.fit.partition, bins):
                strengthRowL.append([mf.month, rD["bin"] + 1, rD["group"], rD["s_out"], rD["s_in"], rD["s_internal"]])
            for top in topFractions:
                for binIdx, rowL in sorted(analysis.instrengthRatioTable(mf.graph, bins, top).items()):
                    for bankId, strength, ratio in rowL:
                        instrengthRowL.append([mf.month, top, binIdx + 1, bankId, strength, ratio])
        ok = self.writeCsv("ogb_sizes.csv", ["month", "ogb", "bin", "size", "network_size"], sizeRowL) and ok
        ok = self.writeCsv("group_strengths.csv", ["month", "ogb", "group", "s_out", "s_in", "s_internal"], strengthRowL) and ok
        ok = self.writeCsv("instrength.csv", ["month", "top", "ogb", "bank", "strength", "instrength_ratio"], instrengthRowL) and ok
        return ok

    def writeYieldReport(self, analysis, records):
        """Monthly categorical yield curves with the spread, and the per-term loan summary."""
        rowL = []
        for month, ys in sorted(analysis.monthlyYieldCurves(records).items()):
            for code in MaturityClass.codes():
                if code in ys.medians:
                    rowL.append([month, monthToLabel(month), code, ys.medians[code], ys.weightedMeans[code], ys.counts[code], ys.spread])
        ok = self.writeCsv("yield.csv", ["month", "label", "maturity", "median_rate", "weighted_mean_rate", "rated_loans", "spread"], rowL)
        ok = self.writeCsv("term_summary.csv", ["maturity", "loans", "volume", "mean_volume", "mean_interest"], analysis.termSummary(records)) and ok
        return ok

    def __field(self, rD, name, key):
        vD = rD.get(name)
        return vD.get(key) if isinstance(vD, dict) else None

    def __formatCell(self, val):
        if val is None:
            return ""
        if isinstance(val, bool):
            return "true" if val else "false"
        if isinstance(val, float):
            return repr(val)
        sVal = str(val)
        if "," in sVal or '"' in sVal:
            sVal = '"%s"' % sVal.replace('"', '""')
        return sVal

    def __export(self, fileName, obj, fmt):
        filePath = self.getPath(fileName)
        ok = self.__mU.doExport(filePath, obj, fmt=fmt, indent=self.__jsonIndent) if fmt == "json" else self.__mU.doExport(filePath, obj, fmt=fmt)
        if ok:
            self.__writtenL.append(fileName)
        else:
            logger.error("Failing to write %s", filePath)
        return ok
