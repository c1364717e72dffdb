##
# File:    BlockState.py
# Author:  J. Westbrook
# Date:    15-Jan-2026
#
# Updates:
#  23-Jan-2026 jdw incremental single-node moves and whole-group merges over all layers
#  30-Jan-2026 jdw drop zeroed block entries so weight statistics restart exactly
#  12-Feb-2026 jdw model bins directly and carry per-layer counts in each block entry
##
"""
Sparse block statistics of a layered graph under a shared partition and a bin set, with incremental
description length deltas for single-node moves and group merges.

The entropy is reported in nats and covers the partition term plus, for every bin, the edge matrix,
degree, adjacency and weight terms.  Bins holding several layers also carry the code that assigns
the edges of each group pair back to their layers, so block entries keep per-layer edge counts.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import math

import numpy as np

from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.SbmDescriptionLength import LN2
from rcsb.utils.layersbm.SbmDescriptionLength import BlockCounts
from rcsb.utils.layersbm.SbmDescriptionLength import WeightPrior
from rcsb.utils.layersbm.SbmDescriptionLength import lnBinom
from rcsb.utils.layersbm.SbmDescriptionLength import lnMultiset
from rcsb.utils.layersbm.SbmDescriptionLength import lnPartitionPrior
from rcsb.utils.layersbm.SbmDescriptionLength import lnWeightMarginal

logger = logging.getLogger(__name__)


class BlockState(object):
    """Mutable block statistics for one layered graph and a partition shared by all bins.

    Block entries are lists [count, sum log w, sum (log w)^2] followed, for bins with m > 1 member
    layers, by the m per-layer edge counts.

    Args:
        graph (LayeredMultigraph): graph over the original layers
        partition (Partition): initial node assignment
        bins (BinSet, optional): bins modelled by the state (default: one bin per layer)
        weightPrior (WeightPrior, optional): log-weight prior hyperparameters
    """

    def __init__(self, graph, partition, **kwargs):
        if partition.getNodeCount() != graph.getNodeCount():
            raise ValueError("partition covers %d nodes, graph has %d" % (partition.getNodeCount(), graph.getNodeCount()))
        bins = kwargs.get("bins", None) or BinSet.singletons(graph.getLayerCount())
        if bins.getLayerCount() != graph.getLayerCount():
            raise ValueError("bin set covers %d layers, graph has %d" % (bins.getLayerCount(), graph.getLayerCount()))
        self.__weightPrior = kwargs.get("weightPrior", None) or WeightPrior()
        self.__numNodes = graph.getNodeCount()
        self.__numLayers = bins.getBinCount()
        #
        self.__b = partition.getAssignment()
        self.__members = {}
        for ii, grp in enumerate(self.__b):
            self.__members.setdefault(grp, set()).add(ii)
        self.__nR = {grp: len(mS) for grp, mS in self.__members.items()}
        self.__groups = sorted(self.__nR)
        #
        self.__outL = []
        self.__inL = []
        self.__selfL = []
        self.__kOut = []
        self.__kIn = []
        self.__numEdges = []
        self.__const = []
        nbrD = [{} for _ in range(self.__numNodes)]
        for binL in bins.getBins():
            self.__addLayer(graph, binL, nbrD)
        self.__nbr = [sorted(dD.items()) for dD in nbrD]
        self.__nbrTotal = [sum(cnt for _, cnt in nL) for nL in self.__nbr]
        self.__rebuildBlocks()

    # --- construction ---
    def __addLayer(self, graph, binL, nbrD):
        width = len(binL) if len(binL) > 1 else 0
        pairD = {}
        srcL = []
        dstL = []
        sumZ = 0.0
        for tag, ordinal in enumerate(binL):
            src, dst, wt = graph.getEdgeArrays(ordinal)
            zV = np.log(wt)
            sumZ += float(np.sum(zV))
            srcL.append(src)
            dstL.append(dst)
            for ii, jj, zz in zip(src.tolist(), dst.tolist(), zV.tolist()):
                vL = pairD.get((ii, jj))
                if vL is None:
                    vL = [0, 0.0, 0.0] + [0] * width
                    pairD[(ii, jj)] = vL
                vL[0] += 1
                vL[1] += zz
                vL[2] += zz * zz
                if width:
                    vL[3 + tag] += 1
        outL = [[] for _ in range(self.__numNodes)]
        inL = [[] for _ in range(self.__numNodes)]
        selfL = [None] * self.__numNodes
        for (ii, jj), vL in sorted(pairD.items()):
            statT = tuple(vL)
            if ii == jj:
                selfL[ii] = statT
                continue
            outL[ii].append((jj, statT))
            inL[jj].append((ii, statT))
            nbrD[ii][jj] = nbrD[ii].get(jj, 0) + vL[0]
            nbrD[jj][ii] = nbrD[jj].get(ii, 0) + vL[0]
        src = np.concatenate(srcL)
        dst = np.concatenate(dstL)
        kOut = np.bincount(src, minlength=self.__numNodes).tolist()
        kIn = np.bincount(dst, minlength=self.__numNodes).tolist()
        const = -sum(math.lgamma(kk + 1) for kk in kOut) - sum(math.lgamma(kk + 1) for kk in kIn)
        const += sum(math.lgamma(vL[0] + 1) for vL in pairD.values()) + sumZ
        if width:
            # parallel edges on one node pair are not ordered within the pair
            const -= sum(math.lgamma(vL[0] + 1) - sum(math.lgamma(cc + 1) for cc in vL[3:]) for vL in pairD.values())
        self.__outL.append(outL)
        self.__inL.append(inL)
        self.__selfL.append(selfL)
        self.__kOut.append(kOut)
        self.__kIn.append(kIn)
        self.__numEdges.append(int(src.size))
        self.__const.append(const)

    def __rebuildBlocks(self):
        self.__ent = []
        self.__rowNz = []
        self.__colNz = []
        self.__eOut = []
        self.__eIn = []
        bL = self.__b
        for layer in range(self.__numLayers):
            entD = {}
            for ii in range(self.__numNodes):
                for jj, statT in self.__outL[layer][ii]:
                    self.__accumulate(entD, (bL[ii], bL[jj]), statT)
                if self.__selfL[layer][ii]:
                    self.__accumulate(entD, (bL[ii], bL[ii]), self.__selfL[layer][ii])
            rowNz = {}
            colNz = {}
            eOut = {}
            eIn = {}
            for (rr, ss), vL in entD.items():
                rowNz.setdefault(rr, set()).add(ss)
                colNz.setdefault(ss, set()).add(rr)
                eOut[rr] = eOut.get(rr, 0) + vL[0]
                eIn[ss] = eIn.get(ss, 0) + vL[0]
            self.__ent.append(entD)
            self.__rowNz.append(rowNz)
            self.__colNz.append(colNz)
            self.__eOut.append(eOut)
            self.__eIn.append(eIn)

    # --- entropy terms (nats) ---
    def __entryTerm(self, statL):
        cnt = statL[0]
        if cnt == 0:
            return 0.0
        weight = lnWeightMarginal(cnt, statL[1], statL[2], self.__weightPrior)
        if len(statL) > 3:
            return lnMultiset(len(statL) - 3, cnt) - sum(math.lgamma(cc + 1) for cc in statL[3:]) - weight
        return -math.lgamma(cnt + 1) - weight

    def __groupTerm(self, nr, eOut, eIn):
        if nr == 0:
            return 0.0
        return math.lgamma(eOut + 1) + math.lgamma(eIn + 1) + lnMultiset(nr, eOut) + lnMultiset(nr, eIn)

    def entropy(self):
        """Return the total description length in nats (partition term plus all per-bin terms)."""
        total = lnPartitionPrior([self.__nR[grp] for grp in self.__groups], self.__numNodes)
        for layer in range(self.__numLayers):
            total += self.layerEntropy(layer)
        return total

    def layerEntropy(self, layer):
        """Return the per-bin terms (edge matrix, degrees, adjacency, weights, layer labels) in nats."""
        numGroups = len(self.__groups)
        eOut = self.__eOut[layer]
        eIn = self.__eIn[layer]
        total = lnMultiset(numGroups * numGroups, self.__numEdges[layer]) + self.__const[layer]
        for grp in self.__groups:
            total += self.__groupTerm(self.__nR[grp], eOut.get(grp, 0), eIn.get(grp, 0))
        for vL in self.__ent[layer].values():
            total += self.__entryTerm(vL)
        return total

    def entropyBits(self):
        return self.entropy() / LN2

    # --- change sets ---
    def __accumulate(self, dD, key, statL, sign=1):
        vL = dD.get(key)
        if vL is None:
            dD[key] = [sign * val for val in statL]
        else:
            for idx, val in enumerate(statL):
                vL[idx] += sign * val

    def __moveChanges(self, node, newGroup):
        oldGroup = self.__b[node]
        nD = {oldGroup: -1, newGroup: 1}
        numGroups = len(self.__groups) - (1 if self.__nR[oldGroup] == 1 else 0) + (0 if newGroup in self.__nR else 1)
        layerL = []
        bL = self.__b
        for layer in range(self.__numLayers):
            entD = {}
            for jj, statT in self.__outL[layer][node]:
                grp = bL[jj]
                self.__accumulate(entD, (oldGroup, grp), statT, -1)
                self.__accumulate(entD, (newGroup, grp), statT)
            for jj, statT in self.__inL[layer][node]:
                grp = bL[jj]
                self.__accumulate(entD, (grp, oldGroup), statT, -1)
                self.__accumulate(entD, (grp, newGroup), statT)
            selfT = self.__selfL[layer][node]
            if selfT:
                self.__accumulate(entD, (oldGroup, oldGroup), selfT, -1)
                self.__accumulate(entD, (newGroup, newGroup), selfT)
            kOut = self.__kOut[layer][node]
            kIn = self.__kIn[layer][node]
            layerL.append((entD, {oldGroup: -kOut, newGroup: kOut}, {oldGroup: -kIn, newGroup: kIn}))
        return nD, numGroups, layerL

    def __mergeChanges(self, fromGroup, toGroup):
        size = self.__nR[fromGroup]
        nD = {fromGroup: -size, toGroup: size}
        layerL = []
        for layer in range(self.__numLayers):
            entD = {}
            ent = self.__ent[layer]
            for ss in self.__rowNz[layer].get(fromGroup, ()):
                statL = ent[(fromGroup, ss)]
                self.__accumulate(entD, (fromGroup, ss), statL, -1)
                self.__accumulate(entD, (toGroup, toGroup if ss == fromGroup else ss), statL)
            for rr in self.__colNz[layer].get(fromGroup, ()):
                if rr == fromGroup:
                    continue
                statL = ent[(rr, fromGroup)]
                self.__accumulate(entD, (rr, fromGroup), statL, -1)
                self.__accumulate(entD, (rr, toGroup), statL)
            eOut = self.__eOut[layer].get(fromGroup, 0)
            eIn = self.__eIn[layer].get(fromGroup, 0)
            layerL.append((entD, {fromGroup: -eOut, toGroup: eOut}, {fromGroup: -eIn, toGroup: eIn}))
        return nD, len(self.__groups) - 1, layerL

    def __delta(self, changes):
        nD, numGroupsNew, layerL = changes
        numGroups = len(self.__groups)
        delta = 0.0
        for grp, dn in nD.items():
            n0 = self.__nR.get(grp, 0)
            delta -= math.lgamma(n0 + dn + 1) - math.lgamma(n0 + 1)
        if numGroupsNew != numGroups:
            delta += lnBinom(self.__numNodes - 1, numGroupsNew - 1) - lnBinom(self.__numNodes - 1, numGroups - 1)
        for layer, (entD, eOutD, eInD) in enumerate(layerL):
            if numGroupsNew != numGroups:
                delta += lnMultiset(numGroupsNew * numGroupsNew, self.__numEdges[layer]) - lnMultiset(numGroups * numGroups, self.__numEdges[layer])
            eOut = self.__eOut[layer]
            eIn = self.__eIn[layer]
            for grp in set(nD) | set(eOutD) | set(eInD):
                n0 = self.__nR.get(grp, 0)
                eo0 = eOut.get(grp, 0)
                ei0 = eIn.get(grp, 0)
                delta += self.__groupTerm(n0 + nD.get(grp, 0), eo0 + eOutD.get(grp, 0), ei0 + eInD.get(grp, 0)) - self.__groupTerm(n0, eo0, ei0)
            ent = self.__ent[layer]
            for key, dL in entD.items():
                old = ent.get(key)
                if old is None:
                    delta += self.__entryTerm(dL)
                    continue
                delta += self.__entryTerm([val + dv for val, dv in zip(old, dL)]) - self.__entryTerm(old)
        return delta

    def __apply(self, changes, nodeMoves):
        nD, _, layerL = changes
        for node, grp in nodeMoves:
            self.__members[self.__b[node]].discard(node)
            self.__members.setdefault(grp, set()).add(node)
            self.__b[node] = grp
        regroup = False
        for grp, dn in nD.items():
            nr = self.__nR.get(grp, 0) + dn
            if nr == 0:
                del self.__nR[grp]
                del self.__members[grp]
                regroup = True
            else:
                regroup = regroup or grp not in self.__nR
                self.__nR[grp] = nr
        if regroup:
            self.__groups = sorted(self.__nR)
        for layer, (entD, eOutD, eInD) in enumerate(layerL):
            self.__applyCounts(self.__eOut[layer], eOutD)
            self.__applyCounts(self.__eIn[layer], eInD)
            ent = self.__ent[layer]
            rowNz = self.__rowNz[layer]
            colNz = self.__colNz[layer]
            for key, dL in entD.items():
                old = ent.get(key)
                cnt = dL[0] if old is None else old[0] + dL[0]
                if cnt == 0:
                    if old is not None:
                        del ent[key]
                        rowNz[key[0]].discard(key[1])
                        colNz[key[1]].discard(key[0])
                    continue
                if old is None:
                    ent[key] = list(dL)
                    rowNz.setdefault(key[0], set()).add(key[1])
                    colNz.setdefault(key[1], set()).add(key[0])
                else:
                    for idx, dv in enumerate(dL):
                        old[idx] += dv

    def __applyCounts(self, countD, deltaD):
        for grp, dk in deltaD.items():
            if dk == 0:
                continue
            val = countD.get(grp, 0) + dk
            if val == 0:
                del countD[grp]
            else:
                countD[grp] = val

    # --- moves and merges ---
    def moveDelta(self, node, group):
        """Return the entropy change (nats) of moving a node to another group."""
        if group == self.__b[node]:
            return 0.0
        return self.__delta(self.__moveChanges(node, group))

    def moveNode(self, node, group):
        if group == self.__b[node]:
            return 0.0
        changes = self.__moveChanges(node, group)
        delta = self.__delta(changes)
        self.__apply(changes, [(node, group)])
        return delta

    def mergeDelta(self, fromGroup, toGroup):
        """Return the entropy change (nats) of merging group fromGroup into toGroup."""
        if fromGroup == toGroup:
            raise ValueError("cannot merge group %r with itself" % fromGroup)
        return self.__delta(self.__mergeChanges(fromGroup, toGroup))

    def mergeGroups(self, fromGroup, toGroup):
        if fromGroup == toGroup:
            raise ValueError("cannot merge group %r with itself" % fromGroup)
        changes = self.__mergeChanges(fromGroup, toGroup)
        delta = self.__delta(changes)
        self.__apply(changes, [(node, toGroup) for node in sorted(self.__members[fromGroup])])
        return delta

    # --- accessors ---
    def getNodeCount(self):
        return self.__numNodes

    def getLayerCount(self):
        return self.__numLayers

    def getGroup(self, node):
        return self.__b[node]

    def getGroups(self):
        """Active group labels in increasing order."""
        return self.__groups

    def getGroupCount(self):
        return len(self.__groups)

    def getGroupSize(self, group):
        return self.__nR.get(group, 0)

    def getGroupSizes(self):
        return dict(self.__nR)

    def getMembers(self, group):
        return sorted(self.__members.get(group, ()))

    def getNeighbors(self, node):
        """Return [(neighbor, edge count), ...] over all layers and both directions, excluding self-loops."""
        return self.__nbr[node]

    def getNeighborCount(self, node):
        return self.__nbrTotal[node]

    def getAssignment(self):
        return list(self.__b)

    def getPartition(self):
        return Partition(self.__b)

    def __canonicalIndex(self):
        idxD = {}
        for grp in self.__b:
            if grp not in idxD:
                idxD[grp] = len(idxD)
        return idxD

    def getEdgeMatrix(self, layer):
        """Return the B x B edge count matrix indexed by canonical group labels."""
        idxD = self.__canonicalIndex()
        ers = np.zeros((len(idxD), len(idxD)), dtype=np.int64)
        for (rr, ss), vL in self.__ent[layer].items():
            ers[idxD[rr], idxD[ss]] = vL[0]
        return ers

    def getBlockCounts(self, layer):
        """Return the layer's sufficient statistics (BlockCounts) under canonical group labels."""
        idxD = self.__canonicalIndex()
        ers = self.getEdgeMatrix(layer)
        numGroups = len(idxD)
        eOut = np.zeros(numGroups, dtype=np.int64)
        eIn = np.zeros(numGroups, dtype=np.int64)
        nR = np.zeros(numGroups, dtype=np.int64)
        for grp, idx in idxD.items():
            eOut[idx] = self.__eOut[layer].get(grp, 0)
            eIn[idx] = self.__eIn[layer].get(grp, 0)
            nR[idx] = self.__nR[grp]
        groupOf = np.array([idxD[grp] for grp in self.__b], dtype=np.int64)
        return BlockCounts(ers, eOut, eIn, nR, np.array(self.__kOut[layer], dtype=np.int64), np.array(self.__kIn[layer], dtype=np.int64), groupOf)

    def checkConsistency(self, tolerance=1.0e-9):
        """Compare the incrementally maintained statistics with a rebuild from scratch."""
        ok = True
        saved = (self.__ent, self.__rowNz, self.__colNz, self.__eOut, self.__eIn)
        entropy = self.entropy()
        self.__rebuildBlocks()
        rebuilt = (self.__ent, self.__rowNz, self.__colNz, self.__eOut, self.__eIn)
        for layer in range(self.__numLayers):
            if set(saved[0][layer]) != set(rebuilt[0][layer]):
                logger.error("Layer %d block entries differ after rebuild", layer)
                ok = False
                continue
            for key, vL in rebuilt[0][layer].items():
                wL = saved[0][layer][key]
                if vL[0] != wL[0] or vL[3:] != wL[3:] or abs(vL[1] - wL[1]) > tolerance * max(1.0, abs(vL[1])) or abs(vL[2] - wL[2]) > tolerance * max(1.0, abs(vL[2])):
                    logger.error("Layer %d entry %r differs: %r vs %r", layer, key, wL, vL)
                    ok = False
            if saved[3][layer] != rebuilt[3][layer] or saved[4][layer] != rebuilt[4][layer]:
                logger.error("Layer %d group degrees differ after rebuild", layer)
                ok = False
        if abs(entropy - self.entropy()) > tolerance:
            logger.error("Entropy drift %.3e nats", entropy - self.entropy())
            ok = False
        return ok
