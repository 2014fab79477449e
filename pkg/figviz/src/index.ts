export { FigureKind, FigureRequest, renderFigure } from "./charts.js";
export { main, parseArgs, render } from "./cli.js";
export {
  EventsData,
  EventTrainData,
  FigvizError,
  RunDir,
  TraceData,
  loadRunDir,
  parseTraceCsv,
  trainByChannel,
  voltageChannels,
} from "./rundir.js";
